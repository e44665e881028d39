#pragma once

// Character sequences u and membership in s_u(X) = {x : (u_n, x) -> 0}.
//
// Integer sequences (characters of T) are indexed from 0; sequences of
// characters of a finite group are indexed from 1, matching the coordinates
// of the graph construction.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "charsub/circle.hpp"
#include "charsub/common.hpp"
#include "charsub/finite_abelian.hpp"
#include "charsub/verdict.hpp"

namespace charsub {

struct ExplicitPrefix {
  std::vector<Int> terms;
};

/// u_n = a * q^n.
struct Geometric {
  Int a;
  Int q;
};

/// u_n = a * n!.
struct Factorial {
  Int a;
};

/// u_n = c_1 u_{n-1} + ... + c_k u_{n-k} for n >= k; initial holds u_0..u_{k-1}.
struct LinearRecurrence {
  std::vector<Int> coeffs;
  std::vector<Int> initial;
};

/// Characters of a finite group: u_1..u_p from the prefix, then the period forever.
struct FiniteEventuallyPeriodic {
  FinAbGroup group;
  std::vector<Coords> prefix;
  std::vector<Coords> period;
};

using SeqSpec = std::variant<ExplicitPrefix, Geometric, Factorial, LinearRecurrence, FiniteEventuallyPeriodic>;

/// Validates invariants (q != 0, nonempty period, shapes) and reduces
/// characters. Throws InvalidArgument.
SeqSpec validated(SeqSpec u);

bool is_finite_sequence(const SeqSpec& u);
bool is_closed_form(const SeqSpec& u);
std::uint64_t first_index(const SeqSpec& u);
std::string seq_str(const SeqSpec& u);

Int eval_term(const SeqSpec& u, std::uint64_t n);
Coords eval_character(const FiniteEventuallyPeriodic& u, std::uint64_t n);

/// Exact structural test: u_n = 0 for all large n.
bool eventually_zero(const SeqSpec& u);

struct Orbit {
  Int modulus;
  std::uint64_t preperiod = 0;
  std::vector<Int> cycle;

  const Int& at(std::uint64_t n) const;
};

inline constexpr std::uint64_t kDefaultOrbitBudget = 10'000'000;

/// u_n mod q = cycle[(n - preperiod) mod len] for n >= preperiod, with both
/// preperiod and cycle minimal. Throws BudgetExceeded past `budget` states.
Orbit residue_orbit(const SeqSpec& u, const Int& q, std::uint64_t budget = kDefaultOrbitBudget);

/// Membership of a circle point, for integer sequences.
Verdict member_su(const SeqSpec& u, const CirclePoint& x, std::uint64_t depth = kDefaultOrbitBudget);
/// Membership of a group element, for finite eventually periodic sequences.
Verdict member_su(const FiniteEventuallyPeriodic& u, const Coords& x);

/// Independent re-check of a verdict against direct term evaluation.
bool recheck_verdict(const SeqSpec& u, const CirclePoint& x, const Verdict& v);
bool recheck_verdict(const FiniteEventuallyPeriodic& u, const Coords& x, const Verdict& v);

/// s_u(X) for finite X.
Subgroup su_finite(const FinAbGroup& x, const FiniteEventuallyPeriodic& u);

// Radical bounds over X = T ------------------------------------------------

enum class Flag { False, True, Unknown };
const char* flag_name(Flag f);

/// Subgroups of Z are n*Z; n = 0 is {0}.
struct RadicalBounds {
  Int certified_superset;
  Int certified_subset;
};

struct RadicalProfile {
  RadicalBounds bounds;
  Flag map = Flag::Unknown;
  Flag minap = Flag::Unknown;
  std::vector<Rat> members;       // nonzero probes found In
  std::uint64_t probes = 0;
  std::uint64_t not_in = 0;
  std::uint64_t unknown = 0;
  std::optional<Int> term_gcd;    // exact gcd of all terms when known
  std::string superset_reason;
  bool t_sequence_asserted = false;
};

/// Probes every p/q with q <= probe_bound plus `extra_probes`.
RadicalProfile radical_profile(const SeqSpec& u, std::uint64_t probe_bound, bool t_sequence_asserted = false,
                               const std::vector<Rat>& extra_probes = {});

// Finite models of the transfer lemmas -----------------------------------------

/// Termwise image under a homomorphism of the dual side, canonicalized.
FiniteEventuallyPeriodic pushforward(const FiniteEventuallyPeriodic& u, const Homomorphism& pi);
/// Shortest period, then shortest prefix.
FiniteEventuallyPeriodic canonical_form(const FiniteEventuallyPeriodic& u);

struct TransferReport {
  bool dually_closed = false;
  bool dually_embedded = false;
  Subgroup n_g;
  Subgroup n_h;   // inside G
  Subgroup restrictions;  // restrictions of S, inside the dual of H
  bool lemma_holds = false;
};

/// `s` is a subgroup of the dual of G, `h` a subgroup of G, and `t_h` a
/// subgroup of the dual of h.as_abstract().group.
TransferReport radical_transfer_check(const FinAbGroup& g, const Subgroup& s, const Subgroup& h, const Subgroup& t_h);
/// Same, with the characters of H given as a raw set; throws InvalidArgument
/// unless the set is a subgroup.
TransferReport radical_transfer_check(const FinAbGroup& g, const Subgroup& s, const Subgroup& h,
                                      const std::vector<Coords>& t_h_set);

/// Restriction of a character of G to h, in the coordinates of h.as_abstract().group.
Coords restrict_character(const FinAbGroup& g, const Subgroup::Abstract& h, const Coords& chi);

}  // namespace charsub
