#pragma once

// The sequence groups T^inf, T_0^H, T_1^H and Z_0^inf, their metrics and
// pairing, and the witness constructions for the non-characterizability of
// T_1^H.
//
// Coordinates of T^inf are stored additively as arguments in [0, 1); the
// coordinate z_n corresponds to exp(2 pi i eps_n). Positions start at 1.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "charsub/circle.hpp"
#include "charsub/common.hpp"
#include "charsub/verdict.hpp"

namespace charsub {

using Index = Int;

// Z_0^inf ----------------------------------------------------------------------

/// Finite-support integer sequence, run-length encoded so that indicator
/// vectors of very long blocks stay small.
class ZInfElem {
 public:
  struct Run {
    Index start;   // first position, >= 1
    Index length;  // >= 1
    Int coeff;     // nonzero
    bool operator==(const Run&) const = default;
  };

  ZInfElem() = default;
  static ZInfElem unit(const Index& k, const Int& coeff = 1);
  /// Coefficient 1 on positions a..b inclusive.
  static ZInfElem indicator(const Index& a, const Index& b);
  static ZInfElem from_map(const std::map<Index, Int>& coeffs);
  static ZInfElem from_runs(std::vector<Run> runs);

  const std::vector<Run>& runs() const { return runs_; }
  bool is_zero() const { return runs_.empty(); }
  Int coeff(const Index& k) const;
  std::optional<Index> min_support() const;
  std::optional<Index> max_support() const;
  Index support_size() const;
  Int l1() const;
  Int l2_squared() const;
  Int linf() const;
  /// Explicit map; throws BudgetExceeded when the support exceeds cap.
  std::map<Index, Int> to_map(std::uint64_t cap = 1'000'000) const;

  ZInfElem operator+(const ZInfElem& other) const;
  ZInfElem operator-() const;
  ZInfElem operator-(const ZInfElem& other) const { return *this + (-other); }
  ZInfElem scaled(const Int& k) const;
  bool operator==(const ZInfElem& other) const { return runs_ == other.runs_; }

  /// "zinf{1: 2, 5: -1}"; long runs print as "a..b: c".
  std::string str() const;

 private:
  std::vector<Run> runs_;
};

// T^inf ----------------------------------------------------------------------------

/// Generator rule of a structured element of T^inf. `entry(m)` is the m-th
/// nonzero coordinate (m >= 0) with strictly increasing positions, or nullopt
/// when there are fewer entries. The remaining members are optional
/// accelerators.
struct PatternRule {
  std::string name;
  std::function<std::optional<std::pair<Index, CirclePoint>>(const Index& m)> entry;
  /// Smallest m whose position is >= n.
  std::function<Index(const Index& n)> first_entry_at_or_after;
  /// Enclosure of sum_{n=a}^{b} eps_n with width <= 2^-bits.
  std::function<Interval(const Index& a, const Index& b, unsigned bits)> argument_sum;
  /// Some K with ||eps_n|| < bound for every n > K.
  std::function<std::optional<Index>(const Rat& bound)> tail_index;
  /// Upper bound of ||eps_n|| over n > after.
  std::function<std::optional<Rat>(const Index& after)> tail_norm_bound;
  /// Upper bound of sum_{n > after} chord(eps_n).
  std::function<std::optional<Rat>(const Index& after)> l1_tail_bound;
};

class TInfElem {
 public:
  /// The identity (all coordinates 1).
  TInfElem() = default;
  static TInfElem finite(std::map<Index, CirclePoint> entries);
  static TInfElem pattern(std::shared_ptr<const PatternRule> rule, Verdict tends_to_1, Verdict l1_summable);

  bool is_finite() const { return rule_ == nullptr; }
  const std::map<Index, CirclePoint>& finite_entries() const { return entries_; }
  const PatternRule* rule() const { return rule_.get(); }
  const Verdict& tends_to_1() const { return tends_; }
  const Verdict& l1_summable() const { return l1_; }

  /// Coordinate at position n (additive).
  CirclePoint at(const Index& n) const;
  /// Nonzero coordinates with position in [a, b], in order.
  std::vector<std::pair<Index, CirclePoint>> entries_in(const Index& a, const Index& b,
                                                        std::uint64_t cap = 1'000'000) const;
  /// The first `count` nonzero coordinates.
  std::vector<std::pair<Index, CirclePoint>> first_entries(std::uint64_t count) const;
  /// Enclosure of sum_{n=a}^{b} eps_n with eps_n in [0, 1).
  Interval argument_sum(const Index& a, const Index& b, unsigned bits = 64) const;

  std::string str() const;

 private:
  std::map<Index, CirclePoint> entries_;
  std::shared_ptr<const PatternRule> rule_;
  Verdict tends_ = In{Int(0), "finite support"};
  Verdict l1_ = In{Int(0), "finite support"};
};

/// eps_n = 1/(C n) for n >= start, and 0 before.
TInfElem harmonic_pattern(const Int& c, const Index& start = 1);
/// eps_n = v for every n >= start.
TInfElem constant_pattern(const CirclePoint& v, const Index& start = 1);

// Metrics and pairing ----------------------------------------------------------------

struct MetricResult {
  enum class Kind { Value, Diverges, Unknown };
  Kind kind = Kind::Unknown;
  Interval value{Rat(0), Rat(0)};  // for Value
  bool exact = false;
  Rat partial_lower;       // for Diverges: certified lower bound of a partial sum
  Index witness_position;  // partial sum over positions <= witness_position
  std::string reason;

  std::string str() const;
};

/// sup_n chord(z_n - w_n). `depth` bounds the number of entries examined.
MetricResult metric_d0(const TInfElem& z, const TInfElem& w, std::uint64_t depth = 100000);
/// sum_n chord(z_n - w_n); Diverges once a partial sum certifiably exceeds `bound`.
MetricResult metric_d1(const TInfElem& z, const TInfElem& w, std::uint64_t depth = 100000, const Rat& bound = 10);

/// sum_k n_k eps_k mod 1.
CirclePoint pair_zinf(const ZInfElem& n, const TInfElem& z);
/// Enclosure of the unreduced real sum sum_k n_k eps_k.
Interval pair_zinf_enclosure(const ZInfElem& n, const TInfElem& z, unsigned bits = 64);

/// support(chi) in (l, inf) and sum n_k^2 <= 1/eps^2.
bool f_eps_l_contains(const ZInfElem& chi, const Rat& eps, const Index& l);

// Sequences in Z_0^inf -------------------------------------------------------------------

/// A sequence omega_1, omega_2, ... in Z_0^inf.
struct OmegaRule {
  std::string name;
  std::function<ZInfElem(const Index& k)> term;  // k >= 1
  std::optional<Index> length;                    // finite sequences
  /// Smallest K with r_1^k > R for every k >= K, when r_1^k -> inf is certified.
  std::function<Index(const Index& r)> r1_tail;
  /// True when r_1^k is certified constant along a subsequence.
  bool r1_bounded = false;
  std::optional<Int> coefficient_bound;  // certified sup_k d_k
  bool coefficients_unbounded = false;   // certified d_k -> inf along a subsequence
  /// max over k' <= k of the largest support index of omega_k'.
  std::function<Index(const Index& k)> max_support_upto;
};

OmegaRule omega_unit();      // e_k
OmegaRule omega_scaled();    // k e_k
OmegaRule omega_anchored();  // e_1 + e_k
OmegaRule omega_prefix(std::vector<ZInfElem> terms);

struct UnboundedWitness {
  std::vector<Index> k;          // k_1 < k_2 < ...
  std::vector<Index> positions;  // r_{i_j}^{k_j}, where |coefficient| = d_{k_j}
  std::vector<Int> d;            // d_{k_j} > j^2
};

struct CoefficientAnalysis {
  Verdict r1_divergent;
  std::variant<Int, UnboundedWitness, Unknown> bound;
};

/// `witness_terms` is the number of subsequence terms produced for an
/// unbounded rule; `scan_cap` bounds the search for each.
CoefficientAnalysis exa1_coefficient_analysis(const OmegaRule& omega, std::size_t witness_terms = 8,
                                              std::uint64_t scan_cap = 1'000'000);

struct UnboundedWitnessResult {
  TInfElem z;
  std::vector<CirclePoint> pairings;  // pair(omega_{k_j}, z)
  Rat l1_bound;                        // sum chord(z_l) <= l1_bound
  bool verified = false;
};

/// Validates the witness conditions and builds z. Throws PreconditionViolation.
UnboundedWitnessResult exa1_unbounded_witness(const OmegaRule& omega, const std::vector<Index>& ks);

struct EscapeTraceRow {
  Index t;
  std::uint64_t m = 0;
  char kind = 'a';  // a: no contribution, b: one block, c: two blocks
  CirclePoint pairing;
  Rat norm;
  Rat bound;        // |n_1|/(mC) + |n_2|/((m+1)C)
  bool ok = false;  // norm <= bound <= 2/m
};

struct EscapeWitness {
  std::vector<Index> k;          // k_1 < k_2 < ...
  std::vector<Index> positions;  // r_1^{k_m}
  std::vector<Rat> values;       // 1/(mC)
  TInfElem z;
  std::vector<EscapeTraceRow> trace;
  bool trace_ok = false;
  MetricResult divergence;  // metric_d1(z, 0)
};

/// Builds z for blocks m <= blocks and traces every t in [k_m, k_{m+1}) for
/// 2 <= m <= blocks. Throws PreconditionViolation on unbounded coefficients or
/// a non-divergent first support.
EscapeWitness exa1_escape_witness(const OmegaRule& omega, const Int& c, std::uint64_t blocks,
                                  const Rat& divergence_bound = 10);

struct EpsilonBlockPartition {
  std::vector<Index> cutoffs;  // k_0 < k_1 < ...
  std::vector<Interval> sums;  // block m is (k_m, k_{m+1}]
  std::vector<bool> exact;     // sum computed exactly (lo == hi)
};

struct GClosureResult {
  bool projection_family = false;  // z does not tend to 1
  EpsilonBlockPartition partition;
  std::vector<ZInfElem> characters;
  std::vector<ChordValue> chords;  // chord(pair(omega_m, z))
};

/// Greedy block partition with every block sum in (1/3, 1/2). `k0` overrides
/// the rule's tail index for the 0.01 bound.
GClosureResult exa1_gclosure_blocks(const TInfElem& z, std::size_t blocks, std::optional<Index> k0 = std::nullopt);

/// For w in T_1^H: chord(pair(omega_m, w)) and the block l1 bound sum chord(w_j).
struct BlockTestRow {
  ChordValue chord;
  Interval block_l1;
};
std::vector<BlockTestRow> gclosure_test_element(const GClosureResult& result, const TInfElem& w);

}  // namespace charsub
