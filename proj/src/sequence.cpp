#include "charsub/sequence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace charsub {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string int_list(const std::vector<Int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + "]";
}

std::string coords_list(const std::vector<Coords>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += coords_str(v[i]);
  }
  return s + "]";
}

// Order of the recurrence after dropping trailing zero coefficients.
std::size_t effective_order(const LinearRecurrence& r) {
  std::size_t k = r.coeffs.size();
  while (k > 0 && r.coeffs[k - 1] == 0) --k;
  return k;
}

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

using State = std::vector<Int>;

// A residue sequence driven by a finite state: residue(state_n) = u_n mod m
// and state_{n+1} = step(state_n). The state at n determines all later terms.
struct Machine {
  State start;
  std::function<void(State&)> step;
  std::function<Int(const State&)> residue;
};

Machine machine_for(const SeqSpec& u, const Int& m) {
  return std::visit(
      overloaded{
          [&](const Geometric& g) -> Machine {
            Int q = mod_floor(g.q, m);
            return Machine{{mod_floor(g.a, m)},
                           [q, m](State& s) { s[0] = mod_floor(s[0] * q, m); },
                           [](const State& s) { return s[0]; }};
          },
          [&](const Factorial& f) -> Machine {
            // State (n mod m, a*n! mod m); once the value is 0 it stays 0.
            return Machine{{Int(0), mod_floor(f.a, m)},
                           [m](State& s) {
                             if (s[1] == 0) {
                               s[0] = 0;
                               return;
                             }
                             s[0] = mod_floor(s[0] + 1, m);
                             s[1] = mod_floor(s[1] * s[0], m);
                           },
                           [](const State& s) { return s[1]; }};
          },
          [&](const LinearRecurrence& r) -> Machine {
            const std::size_t k = r.coeffs.size();
            State start(k);
            for (std::size_t i = 0; i < k; ++i) start[i] = mod_floor(r.initial[i], m);
            std::vector<Int> c = r.coeffs;
            return Machine{start,
                           [c, m, k](State& s) {
                             Int next = 0;
                             for (std::size_t i = 0; i < k; ++i) next += c[i] * s[k - 1 - i];
                             for (std::size_t i = 0; i + 1 < k; ++i) s[i] = s[i + 1];
                             s[k - 1] = mod_floor(next, m);
                           },
                           [](const State& s) { return s[0]; }};
          },
          [&](const ExplicitPrefix&) -> Machine {
            throw InvalidArgument("an explicit prefix has no decidable tail");
          },
          [&](const FiniteEventuallyPeriodic&) -> Machine {
            throw InvalidArgument("residue orbits are defined for integer sequences only");
          },
      },
      u);
}

Rat norm_of(const Rat& t) {
  Rat f = frac(t);
  Rat g = 1 - f;
  return f < g ? f : g;
}

}  // namespace

// Sequences ------------------------------------------------------------------

SeqSpec validated(SeqSpec u) {
  std::visit(overloaded{
                 [](ExplicitPrefix&) {},
                 [](Geometric& g) {
                   if (g.q == 0) throw InvalidArgument("geometric ratio must be nonzero");
                 },
                 [](Factorial&) {},
                 [](LinearRecurrence& r) {
                   if (r.coeffs.empty()) throw InvalidArgument("recurrence needs at least one coefficient");
                   if (r.coeffs.size() != r.initial.size()) {
                     throw InvalidArgument("recurrence needs one initial term per coefficient");
                   }
                 },
                 [](FiniteEventuallyPeriodic& f) {
                   if (f.period.empty()) throw InvalidArgument("period must be nonempty");
                   for (auto& c : f.prefix) c = f.group.reduce(c);
                   for (auto& c : f.period) c = f.group.reduce(c);
                 },
             },
             u);
  return u;
}

bool is_finite_sequence(const SeqSpec& u) { return std::holds_alternative<FiniteEventuallyPeriodic>(u); }

bool is_closed_form(const SeqSpec& u) {
  return std::holds_alternative<Geometric>(u) || std::holds_alternative<Factorial>(u) ||
         std::holds_alternative<LinearRecurrence>(u);
}

std::uint64_t first_index(const SeqSpec& u) { return is_finite_sequence(u) ? 1 : 0; }

std::string seq_str(const SeqSpec& u) {
  return std::visit(overloaded{
                        [](const ExplicitPrefix& e) { return "explicit(" + int_list(e.terms) + ")"; },
                        [](const Geometric& g) { return "geometric(" + g.a.get_str() + "," + g.q.get_str() + ")"; },
                        [](const Factorial& f) { return "factorial(" + f.a.get_str() + ")"; },
                        [](const LinearRecurrence& r) {
                          return "recurrence(" + int_list(r.coeffs) + "," + int_list(r.initial) + ")";
                        },
                        [](const FiniteEventuallyPeriodic& f) {
                          return "finper(" + f.group.str() + ", prefix=" + coords_list(f.prefix) +
                                 ", period=" + coords_list(f.period) + ")";
                        },
                    },
                    u);
}

Int eval_term(const SeqSpec& u, std::uint64_t n) {
  return std::visit(
      overloaded{
          [&](const ExplicitPrefix& e) -> Int {
            if (n >= e.terms.size()) {
              throw InvalidArgument("index " + std::to_string(n) + " beyond explicit prefix of length " +
                                    std::to_string(e.terms.size()));
            }
            return e.terms[n];
          },
          [&](const Geometric& g) -> Int {
            Int p;
            mpz_pow_ui(p.get_mpz_t(), g.q.get_mpz_t(), n);
            return g.a * p;
          },
          [&](const Factorial& f) -> Int {
            Int p;
            mpz_fac_ui(p.get_mpz_t(), n);
            return f.a * p;
          },
          [&](const LinearRecurrence& r) -> Int {
            const std::size_t k = r.coeffs.size();
            if (n < k) return r.initial[n];
            std::vector<Int> w = r.initial;
            for (std::uint64_t i = k; i <= n; ++i) {
              Int next = 0;
              for (std::size_t j = 0; j < k; ++j) next += r.coeffs[j] * w[k - 1 - j];
              w.erase(w.begin());
              w.push_back(next);
            }
            return w.back();
          },
          [&](const FiniteEventuallyPeriodic&) -> Int {
            throw InvalidArgument("finite sequences have character terms; use eval_character");
          },
      },
      u);
}

Coords eval_character(const FiniteEventuallyPeriodic& u, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("finite sequences are indexed from 1");
  if (n <= u.prefix.size()) return u.prefix[n - 1];
  return u.period[(n - 1 - u.prefix.size()) % u.period.size()];
}

bool eventually_zero(const SeqSpec& u) {
  return std::visit(overloaded{
                        [](const ExplicitPrefix&) { return false; },
                        [](const Geometric& g) { return g.a == 0; },
                        [](const Factorial& f) { return f.a == 0; },
                        [](const LinearRecurrence& r) {
                          const std::size_t k = r.coeffs.size();
                          const std::size_t e = effective_order(r);
                          if (e == 0) return true;
                          // From index k - e on the sequence satisfies an order-e
                          // recurrence with invertible companion matrix.
                          for (std::size_t i = k - e; i < k; ++i)
                            if (r.initial[i] != 0) return false;
                          return true;
                        },
                        [](const FiniteEventuallyPeriodic& f) {
                          for (const auto& c : f.period)
                            if (c != f.group.zero()) return false;
                          return true;
                        },
                    },
                    u);
}

// Orbits ---------------------------------------------------------------------------

const Int& Orbit::at(std::uint64_t n) const {
  if (n < preperiod) throw InvalidArgument("index before the cycle");
  return cycle[(n - preperiod) % cycle.size()];
}

Orbit residue_orbit(const SeqSpec& u, const Int& q, std::uint64_t budget) {
  if (q < 1) throw InvalidArgument("modulus must be positive");
  Machine mach = machine_for(u, q);
  std::uint64_t steps = 0;
  auto advance = [&](State& s) {
    if (++steps > budget) throw BudgetExceeded("residue orbit exceeded " + std::to_string(budget) + " steps");
    mach.step(s);
  };
  // Brent cycle detection on the state sequence.
  std::uint64_t power = 1, lam = 1;
  State tortoise = mach.start, hare = mach.start;
  advance(hare);
  while (tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    advance(hare);
    ++lam;
  }
  tortoise = mach.start;
  hare = mach.start;
  for (std::uint64_t i = 0; i < lam; ++i) advance(hare);
  std::uint64_t mu = 0;
  while (tortoise != hare) {
    advance(tortoise);
    advance(hare);
    ++mu;
  }
  Orbit orbit{q, mu, {}};
  State s = tortoise;
  for (std::uint64_t i = 0; i < lam; ++i) {
    orbit.cycle.push_back(mach.residue(s));
    mach.step(s);
  }
  // The state sequence bounds the residue sequence; shrink to the minimal
  // period and preperiod of the residues themselves.
  const std::size_t len = orbit.cycle.size();
  for (std::size_t p = 1; p < len; ++p) {
    if (len % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < len && ok; ++i) ok = orbit.cycle[i] == orbit.cycle[i - p];
    if (ok) {
      orbit.cycle.resize(p);
      break;
    }
  }
  if (orbit.preperiod > 0) {
    std::vector<Int> head;
    State t = mach.start;
    for (std::uint64_t i = 0; i < orbit.preperiod; ++i) {
      head.push_back(mach.residue(t));
      mach.step(t);
    }
    while (orbit.preperiod > 0 && head[orbit.preperiod - 1] == orbit.cycle.back()) {
      std::rotate(orbit.cycle.rbegin(), orbit.cycle.rbegin() + 1, orbit.cycle.rend());
      --orbit.preperiod;
    }
  }
  return orbit;
}

// Membership --------------------------------------------------------------------------

Verdict member_su(const SeqSpec& u, const CirclePoint& x, std::uint64_t depth) {
  if (is_finite_sequence(u)) throw InvalidArgument("finite sequences pair with group elements, not circle points");
  if (x.is_rational() && x.value() == 0) return In{Int(0), "x = 0 is in every s_u"};
  if (eventually_zero(u)) return In{Int(0), "u is eventually zero"};
  if (const auto* e = std::get_if<ExplicitPrefix>(&u)) {
    return Unknown{e->terms.size(), "explicit prefix carries no tail information"};
  }
  if (!x.is_rational()) return Unknown{0, "membership of irrational points is not decided"};
  const Int p = x.value().get_num();
  const Int q = x.value().get_den();
  Orbit orbit;
  try {
    orbit = residue_orbit(u, q, depth);
  } catch (const BudgetExceeded&) {
    return Unknown{depth, "residue orbit mod " + q.get_str() + " not closed within depth"};
  }
  bool all_zero = std::all_of(orbit.cycle.begin(), orbit.cycle.end(), [](const Int& r) { return r == 0; });
  if (all_zero) {
    return In{Int(static_cast<unsigned long>(orbit.preperiod)),
              "u_n = 0 mod " + q.get_str() + " for all n >= cutoff"};
  }
  Rat delta = 1;
  for (const Int& r : orbit.cycle) {
    if (r == 0) continue;
    Rat nv = norm_of(make_rat(r * p, q));
    if (nv < delta) delta = nv;
  }
  return NotIn{delta, "nonzero residues recur on the cycle of u_n mod " + q.get_str(), q,
               Int(static_cast<unsigned long>(orbit.preperiod)), orbit.cycle};
}

Verdict member_su(const FiniteEventuallyPeriodic& u, const Coords& x0) {
  const FinAbGroup& g = u.group;
  Coords x = g.reduce(x0);
  const std::int64_t e = g.exponent();
  std::vector<Int> nums;
  Rat delta = 1;
  bool all_zero = true;
  for (const auto& chi : u.period) {
    std::int64_t v = pair_numerator(g, chi, x);
    nums.emplace_back(static_cast<long>(v));
    if (v != 0) {
      all_zero = false;
      Rat nv = norm_of(make_rat(Int(static_cast<long>(v)), Int(static_cast<long>(e))));
      if (nv < delta) delta = nv;
    }
  }
  const std::uint64_t start = u.prefix.size() + 1;
  if (!all_zero) {
    return NotIn{delta, "a character on the period does not vanish at x", Int(static_cast<long>(e)),
                 Int(static_cast<unsigned long>(start)), nums};
  }
  std::uint64_t cutoff = start;
  while (cutoff > 1 && pair_numerator(g, u.prefix[cutoff - 2], x) == 0) --cutoff;
  return In{Int(static_cast<unsigned long>(cutoff)), "every character from the cutoff on vanishes at x"};
}

bool recheck_verdict(const SeqSpec& u, const CirclePoint& x, const Verdict& v) {
  if (const auto* in = std::get_if<In>(&v)) {
    if (x.is_rational() && x.value() == 0) return true;
    if (eventually_zero(u)) return true;
    if (!x.is_rational() || !in->cutoff.fits_ulong_p()) return false;
    const Int q = x.value().get_den();
    const std::uint64_t n = in->cutoff.get_ui();
    // A window of zeros determines every later term.
    std::size_t window = 1;
    if (const auto* r = std::get_if<LinearRecurrence>(&u)) window = r->coeffs.size();
    if (std::holds_alternative<ExplicitPrefix>(u) || is_finite_sequence(u)) return false;
    for (std::size_t i = 0; i < window; ++i)
      if (mod_floor(eval_term(u, n + i), q) != 0) return false;
    return true;
  }
  if (const auto* out = std::get_if<NotIn>(&v)) {
    if (!x.is_rational() || out->delta <= 0 || out->cycle.empty()) return false;
    if (!is_closed_form(u)) return false;
    const Rat& xv = x.value();
    if (out->modulus != xv.get_den() || !out->preperiod.fits_ulong_p()) return false;
    const std::uint64_t pre = out->preperiod.get_ui();
    const std::uint64_t len = out->cycle.size();
    std::size_t window = 1;
    if (const auto* r = std::get_if<LinearRecurrence>(&u)) window = r->coeffs.size();
    if (std::holds_alternative<Factorial>(u)) return false;  // a*n! is eventually 0 mod q
    for (std::uint64_t i = 0; i < len + window; ++i) {
      if (mod_floor(eval_term(u, pre + i), out->modulus) != out->cycle[i % len]) return false;
    }
    bool witnessed = false;
    for (const Int& r : out->cycle) {
      if (r != 0 && norm_of(Rat(r) * xv) >= out->delta) witnessed = true;
    }
    return witnessed;
  }
  return true;
}

bool recheck_verdict(const FiniteEventuallyPeriodic& u, const Coords& x, const Verdict& v) {
  const FinAbGroup& g = u.group;
  if (const auto* in = std::get_if<In>(&v)) {
    if (!in->cutoff.fits_ulong_p() || in->cutoff < 1) return false;
    const std::uint64_t n = in->cutoff.get_ui();
    const std::uint64_t last = u.prefix.size() + u.period.size();
    for (std::uint64_t i = n; i <= std::max(last, n); ++i)
      if (pair_numerator(g, eval_character(u, i), x) != 0) return false;
    return true;
  }
  if (const auto* out = std::get_if<NotIn>(&v)) {
    if (out->delta <= 0) return false;
    for (const auto& chi : u.period) {
      std::int64_t num = pair_numerator(g, chi, x);
      if (num != 0 && norm_of(make_rat(Int(static_cast<long>(num)), Int(static_cast<long>(g.exponent())))) >= out->delta)
        return true;
    }
    return false;
  }
  return true;
}

Subgroup su_finite(const FinAbGroup& x, const FiniteEventuallyPeriodic& u) {
  if (!(u.group == x)) throw InvalidArgument("sequence characters belong to " + u.group.str() + ", not " + x.str());
  return annihilator(Subgroup(x, u.period));
}

// Radical ------------------------------------------------------------------------------

const char* flag_name(Flag f) {
  switch (f) {
    case Flag::True:
      return "true";
    case Flag::False:
      return "false";
    default:
      return "unknown";
  }
}

namespace {

std::optional<Int> exact_term_gcd(const SeqSpec& u) {
  if (const auto* g = std::get_if<Geometric>(&u)) return abs_int(g->a);
  if (const auto* f = std::get_if<Factorial>(&u)) return abs_int(f->a);
  if (const auto* r = std::get_if<LinearRecurrence>(&u)) {
    Int acc = 0;
    for (const Int& t : r->initial) acc = gcd(acc, t);
    return acc;
  }
  return std::nullopt;
}

// Points 1/b_j with b_j unbounded, all members of s_u by a closed-form argument.
std::vector<Rat> family_points(const SeqSpec& u, std::string& reason) {
  std::vector<Rat> pts;
  if (const auto* g = std::get_if<Geometric>(&u)) {
    Int b = abs_int(g->q);
    if (b < 2) return pts;
    Int den = 1;
    for (int j = 1; j <= 10; ++j) {
      den *= b;
      pts.push_back(make_rat(Int(1), den));
    }
    reason = "1/" + b.get_str() + "^j lies in s_u for every j since a*q^n/q^j is an integer for n >= j";
  } else if (std::holds_alternative<Factorial>(u)) {
    Int den = 1;
    for (unsigned long j = 2; j <= 11; ++j) {
      den *= j;
      pts.push_back(make_rat(Int(1), den));
    }
    reason = "1/j! lies in s_u for every j since a*n!/j! is an integer for n >= j";
  }
  return pts;
}

}  // namespace

RadicalProfile radical_profile(const SeqSpec& u, std::uint64_t probe_bound, bool t_sequence_asserted,
                               const std::vector<Rat>& extra_probes) {
  if (is_finite_sequence(u)) throw InvalidArgument("radical profile is defined for integer sequences");
  RadicalProfile out;
  out.t_sequence_asserted = t_sequence_asserted;
  out.term_gcd = exact_term_gcd(u);

  if (eventually_zero(u)) {
    out.bounds = {Int(0), Int(0)};
    out.superset_reason = "u is eventually zero, so s_u(T) = T";
    out.map = Flag::True;
    out.minap = Flag::False;
    return out;
  }

  std::set<Rat> probes;
  for (std::uint64_t q = 2; q <= probe_bound; ++q)
    for (std::uint64_t p = 1; p < q; ++p)
      if (std::gcd(p, q) == 1) probes.insert(Rat(static_cast<unsigned long>(p), static_cast<unsigned long>(q)));
  for (const Rat& r : extra_probes) {
    Rat f = frac(r);
    if (f != 0) probes.insert(f);
  }
  std::string family_reason;
  std::vector<Rat> family = family_points(u, family_reason);
  for (const Rat& r : family) probes.insert(r);

  std::set<Rat> members;
  for (const Rat& r : probes) {
    ++out.probes;
    Verdict v = member_su(u, CirclePoint::rational(r));
    if (is_in(v))
      members.insert(r);
    else if (is_not_in(v))
      ++out.not_in;
    else
      ++out.unknown;
  }
  out.members.assign(members.begin(), members.end());

  bool family_ok = !family.empty() &&
                   std::all_of(family.begin(), family.end(), [&](const Rat& r) { return members.count(r) > 0; });
  if (family_ok) {
    out.bounds = {Int(0), Int(0)};
    out.superset_reason = family_reason;
  } else {
    Int l = 1;
    for (const Rat& r : members) l = lcm(l, r.get_den());
    out.bounds = {l, Int(0)};
    out.superset_reason = "annihilator of the rational members found";
  }

  // Density at scale 1/Q: every closed interval [j/Q, (j+1)/Q] meets {0} or a member.
  bool dense = probe_bound >= 1;
  for (std::uint64_t j = 0; j < probe_bound && dense; ++j) {
    Rat lo(static_cast<unsigned long>(j), static_cast<unsigned long>(probe_bound));
    Rat hi(static_cast<unsigned long>(j + 1), static_cast<unsigned long>(probe_bound));
    lo.canonicalize();
    hi.canonicalize();
    if (lo == 0 || hi == 1) continue;
    auto it = members.lower_bound(lo);
    dense = it != members.end() && *it <= hi;
  }
  out.map = dense ? Flag::True : Flag::Unknown;

  if (!members.empty()) {
    out.minap = Flag::False;
  } else if (out.term_gcd && *out.term_gcd != 1) {
    out.minap = Flag::False;
  } else if (out.term_gcd && out.unknown == 0) {
    out.minap = Flag::True;
  } else {
    out.minap = Flag::Unknown;
  }
  return out;
}

// Transfer lemmas ----------------------------------------------------------------------

FiniteEventuallyPeriodic canonical_form(const FiniteEventuallyPeriodic& u) {
  FiniteEventuallyPeriodic out = u;
  const std::size_t len = out.period.size();
  for (std::size_t p = 1; p < len; ++p) {
    if (len % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < len && ok; ++i) ok = out.period[i] == out.period[i - p];
    if (ok) {
      out.period.resize(p);
      break;
    }
  }
  while (!out.prefix.empty() && out.prefix.back() == out.period.back()) {
    std::rotate(out.period.rbegin(), out.period.rbegin() + 1, out.period.rend());
    out.prefix.pop_back();
  }
  return out;
}

FiniteEventuallyPeriodic pushforward(const FiniteEventuallyPeriodic& u, const Homomorphism& pi) {
  if (!(pi.source() == u.group)) throw InvalidArgument("projection source does not match the sequence group");
  FiniteEventuallyPeriodic out{pi.target(), {}, {}};
  for (const auto& c : u.prefix) out.prefix.push_back(pi.apply(c));
  for (const auto& c : u.period) out.period.push_back(pi.apply(c));
  return canonical_form(out);
}

Coords restrict_character(const FinAbGroup& g, const Subgroup::Abstract& h, const Coords& chi) {
  const auto& factors = h.group.factors();
  Coords eta(factors.size());
  const std::int64_t e = g.exponent();
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const std::int64_t num = pair_numerator(g, chi, h.embedding.images()[j]);
    const __int128 scaled = static_cast<__int128>(num) * factors[j];
    if (scaled % e != 0) throw Error("internal: restriction is not a character of the subgroup");
    eta[j] = static_cast<std::int64_t>(scaled / e) % factors[j];
  }
  return eta;
}

TransferReport radical_transfer_check(const FinAbGroup& g, const Subgroup& s, const Subgroup& h,
                                      const Subgroup& t_h) {
  if (!(s.ambient() == g) || !(h.ambient() == g)) throw InvalidArgument("S and H must live in G and its dual");
  Subgroup::Abstract habs = h.as_abstract();
  if (!(t_h.ambient() == habs.group)) {
    throw InvalidArgument("T_H must be a subgroup of the dual of " + habs.group.str());
  }
  std::vector<Coords> res;
  for (const Coords& chi : s.generators()) res.push_back(restrict_character(g, habs, chi));
  Subgroup restrictions(habs.group, res);
  if (!restrictions.is_subgroup_of(t_h)) {
    throw PreconditionViolation("restrictions of S must be available characters of H");
  }

  Subgroup vanishing = s.meet(annihilator(h));
  bool closed = annihilator(vanishing) == h;
  bool embedded = restrictions == t_h;

  Subgroup n_g = annihilator(s);
  Subgroup n_h_abs = annihilator(t_h);
  std::vector<Coords> pushed;
  for (const Coords& x : n_h_abs.generators()) pushed.push_back(habs.embedding.apply(x));
  Subgroup n_h(g, pushed);
  bool holds = n_h == n_g;
  return TransferReport{closed, embedded, n_g, n_h, restrictions, holds};
}

TransferReport radical_transfer_check(const FinAbGroup& g, const Subgroup& s, const Subgroup& h,
                                      const std::vector<Coords>& t_h_set) {
  Subgroup::Abstract habs = h.as_abstract();
  std::set<Coords> set;
  for (const Coords& c : t_h_set) {
    if (!habs.group.valid(c)) throw InvalidArgument("character " + coords_str(c) + " is not reduced in " + habs.group.str());
    set.insert(c);
  }
  if (!set.count(habs.group.zero())) throw InvalidArgument("T_H must contain the trivial character");
  for (const Coords& a : set)
    for (const Coords& b : set)
      if (!set.count(habs.group.add(a, b))) {
        throw InvalidArgument("T_H is not closed under addition: " + coords_str(a) + " + " + coords_str(b));
      }
  return radical_transfer_check(g, s, h, Subgroup(habs.group, std::vector<Coords>(set.begin(), set.end())));
}

}  // namespace charsub
