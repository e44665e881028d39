#pragma once

// Integer relations among points of T, simultaneous approximation by
// characters of Z, and the l1 word cancellation behind non-polishability.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "charsub/circle.hpp"
#include "charsub/common.hpp"
#include "charsub/lattice.hpp"

namespace charsub {

struct RelationCertificate {
  IntVector coefficients;  // not all zero; first nonzero entry positive
  bool exact_zero = false;  // decided symbolically
  Interval residual;        // enclosure of ||sum n_i x_i||
  bool torsion_only = false;  // every n_i x_i vanishes on its own
};

struct RelationResult {
  enum class Kind { Found, NoneFound, Ambiguous };
  Kind kind = Kind::NoneFound;
  std::optional<RelationCertificate> relation;
  IntVector ambiguous;  // candidate that the working precision cannot decide
  Int height;
  unsigned precision_bits = 0;
  std::string method;
};

const char* relation_kind_name(RelationResult::Kind k);

/// Searches for n != 0 with |n_i| <= height and sum n_i x_i = 0 mod 1.
/// Rationals and quadratic surds are decided exactly through the relation
/// lattice; other points use a certified exhaustive scan.
RelationResult integer_relation(const std::vector<CirclePoint>& xs, const Int& height, unsigned bits = 128);

/// Plain exhaustive scan over [-height, height]^m, decided exactly; used as an
/// oracle for small inputs. Throws BudgetExceeded above `cap` candidates.
std::optional<IntVector> relation_scan(const std::vector<CirclePoint>& xs, std::int64_t height,
                                       std::uint64_t cap = 50'000'000);

struct KroneckerSolution {
  Int n;
  std::vector<NormValue> achieved;  // ||n x_i - t_i||
  std::vector<Rat> achieved_upper;
};

struct KroneckerResult {
  std::optional<KroneckerSolution> solution;
  std::optional<RelationResult> dependency;  // the independence gate failed
  std::uint64_t scanned = 0;
  Int gate_height;
  bool reverified = false;  // solution re-checked at doubled precision
};

/// Smallest n in [1, N] with every ||n x_i - t_i|| < eps; exact over the range.
KroneckerResult kronecker_char_search(const std::vector<CirclePoint>& xs, const std::vector<CirclePoint>& targets,
                                      const Rat& eps, std::uint64_t n_max, const Int& gate_height = 20);

/// Re-checks ||n x_i - t_i|| < eps with enclosures of the given precision.
bool verify_kronecker(const std::vector<CirclePoint>& xs, const std::vector<CirclePoint>& targets, const Rat& eps,
                      const Int& n, unsigned bits);

struct WordCheckReport {
  std::uint64_t rank = 0;
  std::uint64_t n0 = 0;
  std::uint64_t vectors_checked = 0;  // g with ||g||_1 <= n0
  std::uint64_t violations = 0;       // g != 0 with ||2 n0 g||_1 <= n0
  std::vector<std::uint64_t> ball_counts;  // #{v : ||v||_1 <= n}, n = 0..n0, by enumeration
  std::vector<std::uint64_t> delannoy;     // the same counts by recurrence
  bool counts_match = false;
  bool symbolic = false;  // 2 n0 ||g|| <= n0 forces ||g|| = 0
  bool passed = false;
};

WordCheckReport l1_word_check(std::uint64_t rank, std::uint64_t n0);

/// D(r, n) = D(r-1, n) + D(r, n-1) + D(r-1, n-1), D(0, n) = D(r, 0) = 1.
std::uint64_t delannoy_count(std::uint64_t r, std::uint64_t n);
/// #{v in Z^r : ||v||_1 <= n} by direct enumeration.
std::uint64_t l1_ball_count(std::uint64_t r, std::uint64_t n);

}  // namespace charsub
