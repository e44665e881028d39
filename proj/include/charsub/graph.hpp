#pragma once

// The graph subgroup G_u = {(x; (u_1, x), (u_2, x), ...)} of X x T^inf, its
// separation by characters, the annihilator G_u^perp, and the sets A(k, m)
// that generate the finest topology in which u converges to zero.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "charsub/circle.hpp"
#include "charsub/common.hpp"
#include "charsub/finite_abelian.hpp"
#include "charsub/polish.hpp"
#include "charsub/sequence.hpp"
#include "charsub/verdict.hpp"

namespace charsub {

struct GraphPoint {
  std::variant<Coords, CirclePoint> base;
  std::vector<CirclePoint> trace;  // trace[n-1] = (u_n, base)
};

/// Trace (u_1, g), ..., (u_N, g) for characters of a finite group.
GraphPoint graph_point(const FiniteEventuallyPeriodic& u, const Coords& g, std::size_t n);
/// Trace (u_1, x), ..., (u_N, x) for an integer sequence and a point of T.
GraphPoint graph_point(const SeqSpec& u, const CirclePoint& x, std::size_t n);

/// L_i inside X x Z_M^i: coordinate k of the tail is M * (u_k, x).
struct LiSubgroup {
  FinAbGroup product;
  Subgroup l;
  std::int64_t modulus = 1;  // M; a multiple of exp(X)
  std::size_t depth = 0;
};

/// Uses M = exp(X) unless a larger multiple is requested.
LiSubgroup li_subgroup(const FiniteEventuallyPeriodic& u, std::size_t depth, std::int64_t modulus = 0);

struct SeparatingCharacter {
  Coords base_char;   // a character of X
  ZInfElem tail;      // n_1, ..., n_i
  std::size_t index = 0;  // minimal i with z_i != (u_i, x)
  std::int64_t modulus = 1;
  CirclePoint value;  // (base_char, x) + sum n_k z_k
  bool verified = false;
  std::uint64_t checked = 0;  // points of L_i checked
  bool fallback = false;      // (-u_i; e_i) used for an irrational claim
};

/// Value of (base_char; tail) at (x; z).
CirclePoint separator_value(const FiniteEventuallyPeriodic& u, const SeparatingCharacter& s, const Coords& x,
                            const std::vector<CirclePoint>& z);

/// Exhaustive check over L_i: the separator vanishes on every graph point
/// through depth i.
bool verify_annihilates_graph(const FiniteEventuallyPeriodic& u, const SeparatingCharacter& s, std::uint64_t* checked = nullptr);

/// Caches L_i and its annihilator per (depth, modulus).
class Separator {
 public:
  explicit Separator(FiniteEventuallyPeriodic u);

  /// Throws PreconditionViolation when the claim agrees with the graph.
  SeparatingCharacter separate(const Coords& x, const std::vector<CirclePoint>& trace_claim);
  const FiniteEventuallyPeriodic& sequence() const { return u_; }

 private:
  struct Context {
    LiSubgroup li;
    Subgroup perp;
  };
  const Context& context(std::size_t depth, std::int64_t modulus);

  FiniteEventuallyPeriodic u_;
  std::map<std::pair<std::size_t, std::int64_t>, Context> cache_;
};

SeparatingCharacter separate_point(const FiniteEventuallyPeriodic& u, const Coords& x,
                                   const std::vector<CirclePoint>& trace_claim);

/// Lexicographically smallest element of h with f(h) != 0 mod n, where
/// f(c) = sum_j c_j w_j; nullopt when f vanishes on h.
std::optional<Coords> lex_min_outside_kernel(const Subgroup& h, const std::vector<std::int64_t>& w, std::int64_t n);

// G_u^perp ------------------------------------------------------------------

struct PerpGenerator {
  Coords base_char;  // -u_k
  ZInfElem tail;     // e_k
};

struct PerpReport {
  std::vector<PerpGenerator> generators;
  bool annihilates = false;  // every generator kills every graph point (exhaustive over Y)
  bool relation_holds = false;  // (u_n; 0) - (0; e_n) lies in the generated subgroup for n <= l
  bool plus_sign_holds = false;  // (u_n; 0) - (0; -e_n) does, which needs 2 u_n = 0
  std::uint64_t points_checked = 0;
};

/// (y; s) lies in G_u^perp iff y + sum s_k u_k = 0.
bool in_gu_perp(const FiniteEventuallyPeriodic& u, const Coords& y, const ZInfElem& s);
/// Membership in the subgroup generated by (-u_k; e_k), k <= l.
bool in_generated_perp(const FiniteEventuallyPeriodic& u, std::size_t l, const Coords& y, const ZInfElem& s);

/// Requires s_u(Y) = Y; throws PreconditionViolation otherwise.
PerpReport gu_perp_generators(const FiniteEventuallyPeriodic& u, std::size_t l);

struct Closure {
  Subgroup y;                        // s_u(X), inside X
  FiniteEventuallyPeriodic restricted;  // over y.as_abstract().group
};

Closure restrict_to_closure(const FiniteEventuallyPeriodic& u);

// A(k, m) ---------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultStateBudget = 2'000'000;

/// Values n_1 u_{r_1} + ... + n_s u_{r_s} with m <= r_1 < ... < r_s <= N,
/// s >= 1, n_i != 0, sum |n_i| <= k, each with its least l1 cost.
std::map<Int, std::uint64_t> akm_costs(const SeqSpec& u, std::uint64_t k, std::uint64_t m, std::uint64_t n,
                                       std::uint64_t budget = kDefaultStateBudget);
std::map<Coords, std::uint64_t> akm_costs(const FiniteEventuallyPeriodic& u, std::uint64_t k, std::uint64_t m,
                                          std::uint64_t n, std::uint64_t budget = kDefaultStateBudget);

std::set<Int> enumerate_akm(const SeqSpec& u, std::uint64_t k, std::uint64_t m, std::uint64_t n,
                            std::uint64_t budget = kDefaultStateBudget);
std::set<Coords> enumerate_akm(const FiniteEventuallyPeriodic& u, std::uint64_t k, std::uint64_t m, std::uint64_t n,
                               std::uint64_t budget = kDefaultStateBudget);

struct AkmCover {
  bool found = false;
  std::uint64_t k = 0;
  std::optional<Int> uncovered;
};

/// Smallest k with K inside A(k, 0) u {0}, truncated at index n.
AkmCover akm_exhaustion(const SeqSpec& u, const std::vector<Int>& targets, std::uint64_t k_max, std::uint64_t n);

// Neighborhoods sum_i A*_{n_i} ----------------------------------------------------------

struct DecompositionTerm {
  std::uint64_t cutoff = 0;  // n_i
  std::uint64_t index = 0;   // l_i >= n_i
  int sign = 0;              // 0 for the zero element of A*
};

struct NeighborhoodResult {
  Verdict verdict;
  std::vector<DecompositionTerm> decomposition;
  std::optional<Int> certificate_modulus;  // y mod q misses the sumset of residues
  std::uint64_t nodes = 0;
};

/// Iterative deepening over the largest index used, up to `depth`.
NeighborhoodResult neighborhood_member(const SeqSpec& u, const std::vector<std::uint64_t>& cutoffs, const Int& y,
                                       std::uint64_t depth = 12, std::uint64_t budget = 5'000'000);

/// Re-sums a decomposition and checks l_i >= n_i.
bool check_decomposition(const SeqSpec& u, const std::vector<std::uint64_t>& cutoffs, const Int& y,
                         const std::vector<DecompositionTerm>& terms);

// Continuity at a point --------------------------------------------------------------------

struct ContinuityReport {
  Verdict membership;
  std::vector<std::uint64_t> cutoffs;  // n_0 < n_1 < ...
  std::uint64_t samples = 0;
  bool all_below = false;  // every sampled y has chord((y, x)) < eps
  Rat max_chord_upper;
};

ContinuityReport continuity_certificate(const SeqSpec& u, const CirclePoint& x, const Rat& eps,
                                        std::uint64_t sample_budget = 1000, std::uint64_t levels = 8,
                                        std::uint64_t seed = 1);

}  // namespace charsub
