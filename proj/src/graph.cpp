#include "charsub/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace charsub {

namespace {

using i128 = __int128;

std::int64_t mod_i128(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::int64_t to_i64(const Int& a) {
  if (!a.fits_slong_p()) throw InvalidArgument("value " + a.get_str() + " does not fit in 64 bits");
  return a.get_si();
}

CirclePoint rational_point(std::int64_t num, std::int64_t den) {
  return canonicalize(Int(static_cast<long>(num)), Int(static_cast<long>(den)));
}

// Numerator of (chi, x) over exp(X), in [0, exp(X)).
std::int64_t pn(const FinAbGroup& g, const Coords& chi, const Coords& x) {
  return mod_floor(pair_numerator(g, chi, x), g.exponent());
}

}  // namespace

// Graph points -------------------------------------------------------------------------

GraphPoint graph_point(const FiniteEventuallyPeriodic& u, const Coords& g, std::size_t n) {
  const Coords x = u.group.reduce(g);
  GraphPoint out{x, {}};
  for (std::size_t k = 1; k <= n; ++k) {
    out.trace.push_back(rational_point(pn(u.group, eval_character(u, k), x), u.group.exponent()));
  }
  return out;
}

GraphPoint graph_point(const SeqSpec& u, const CirclePoint& x, std::size_t n) {
  if (is_finite_sequence(u)) throw InvalidArgument("finite sequences pair with group elements, not circle points");
  GraphPoint out{x, {}};
  for (std::size_t k = 1; k <= n; ++k) out.trace.push_back(pair(eval_term(u, k), x));
  return out;
}

LiSubgroup li_subgroup(const FiniteEventuallyPeriodic& u, std::size_t depth, std::int64_t modulus) {
  const FinAbGroup& x = u.group;
  const std::int64_t m = x.exponent();
  std::int64_t big = modulus == 0 ? m : modulus;
  if (big % m != 0) throw InvalidArgument("modulus must be a multiple of exp(X)");
  std::vector<std::int64_t> factors = x.factors();
  if (big > 1) factors.insert(factors.end(), depth, big);
  LiSubgroup out{FinAbGroup(factors), Subgroup::trivial(FinAbGroup(factors)), big, depth};
  const std::size_t r = x.rank();
  std::vector<Coords> gens;
  for (std::size_t j = 0; j < r; ++j) {
    Coords e(r, 0);
    e[j] = 1;
    Coords img(out.product.rank(), 0);
    img[j] = 1;
    if (big > 1) {
      for (std::size_t k = 1; k <= depth; ++k) img[r + k - 1] = pn(x, eval_character(u, k), e) * (big / m);
    }
    gens.push_back(std::move(img));
  }
  out.l = Subgroup(out.product, gens);
  return out;
}

// Lexicographic search ------------------------------------------------------------------

std::optional<Coords> lex_min_outside_kernel(const Subgroup& h, const std::vector<std::int64_t>& w, std::int64_t n) {
  const auto& d = h.ambient().factors();
  const auto& b = h.hermite_basis();
  const std::size_t r = d.size();
  if (w.size() != r) throw InvalidArgument("functional shape does not match the group");
  std::vector<std::int64_t> frow(r, 0);
  for (std::size_t j = 0; j < r; ++j) {
    i128 s = 0;
    for (std::size_t k = 0; k < r; ++k) s = (s + static_cast<i128>(b[j][k]) * w[k]) % n;
    frow[j] = mod_i128(s, n);
  }
  std::vector<bool> vanish_from(r + 1, true);
  for (std::size_t j = r; j-- > 0;) vanish_from[j] = vanish_from[j + 1] && frow[j] == 0;

  auto add_row = [&](Coords& v, std::int64_t& fv, std::size_t j, std::int64_t c) {
    for (std::size_t k = j; k < r; ++k) v[k] = mod_i128(v[k] + static_cast<i128>(c) * b[j][k], d[k]);
    fv = mod_i128(fv + static_cast<i128>(c) * frow[j], n);
  };

  std::function<std::optional<Coords>(std::size_t, Coords, std::int64_t)> dfs =
      [&](std::size_t j, Coords v, std::int64_t fv) -> std::optional<Coords> {
    if (vanish_from[j]) {
      if (fv == 0) return std::nullopt;
      for (std::size_t k = j; k < r; ++k) add_row(v, fv, k, -(v[k] / b[k][k]));
      return v;
    }
    const std::int64_t p = b[j][j];
    const std::int64_t base = v[j] % p;
    const std::int64_t steps = d[j] / p;
    for (std::int64_t t = 0; t < steps; ++t) {
      Coords v2 = v;
      std::int64_t f2 = fv;
      add_row(v2, f2, j, (base + t * p - v[j]) / p);
      if (auto found = dfs(j + 1, std::move(v2), f2)) return found;
    }
    return std::nullopt;
  };
  return dfs(0, Coords(r, 0), 0);
}

// Separation ----------------------------------------------------------------------------------

CirclePoint separator_value(const FiniteEventuallyPeriodic& u, const SeparatingCharacter& s, const Coords& x,
                            const std::vector<CirclePoint>& z) {
  // all-rational traces with word-sized denominators: one residue mod the common denominator
  {
    const std::int64_t m = u.group.exponent();
    std::int64_t den = m;
    bool small = true;
    for (const auto& run : s.tail.runs()) {
      small = small && run.coeff.fits_slong_p();
      for (Index k = run.start; small && k < run.start + run.length; ++k) {
        if (k > Index(static_cast<unsigned long>(z.size()))) throw InvalidArgument("trace shorter than the separator tail");
        const CirclePoint& zk = z[k.get_ui() - 1];
        small = zk.is_rational() && mpz_fits_slong_p(zk.value().get_den_mpz_t());
        if (small) {
          const i128 l = static_cast<i128>(den) / std::gcd(den, mpz_get_si(zk.value().get_den_mpz_t())) *
                         mpz_get_si(zk.value().get_den_mpz_t());
          small = l < (static_cast<i128>(1) << 40);
          if (small) den = static_cast<std::int64_t>(l);
        }
      }
    }
    if (small) {
      i128 acc = static_cast<i128>(mod_floor(pair_numerator(u.group, s.base_char, u.group.reduce(x)), m)) * (den / m);
      for (const auto& run : s.tail.runs()) {
        const i128 c = mod_i128(run.coeff.get_si(), den);
        for (Index k = run.start; k < run.start + run.length; ++k) {
          const Rat& q = z[k.get_ui() - 1].value();
          const std::int64_t d = mpz_get_si(q.get_den_mpz_t());
          acc = mod_i128(acc + static_cast<i128>(mod_i128(c * mpz_get_si(q.get_num_mpz_t()), d)) * (den / d), den);
        }
      }
      const std::int64_t a = static_cast<std::int64_t>(acc), g = std::gcd(a, den);
      return CirclePoint::rational(Rat(Int(static_cast<long>(a / g)), Int(static_cast<long>(den / g))));
    }
  }
  CirclePoint v = dual_pair_finite(u.group, Character{s.base_char}, GroupElement{u.group.reduce(x)});
  for (const auto& run : s.tail.runs()) {
    for (Index k = run.start; k < run.start + run.length; ++k) {
      if (k > Index(static_cast<unsigned long>(z.size()))) throw InvalidArgument("trace shorter than the separator tail");
      v = v + pair(run.coeff, z[k.get_ui() - 1]);
    }
  }
  return v;
}

bool verify_annihilates_graph(const FiniteEventuallyPeriodic& u, const SeparatingCharacter& s, std::uint64_t* checked) {
  const FinAbGroup& g = u.group;
  const std::int64_t m = g.exponent();
  std::vector<std::pair<Coords, std::int64_t>> terms;  // (u_k, n_k mod m)
  for (const auto& run : s.tail.runs()) {
    const std::int64_t c = to_i64(mod_floor(run.coeff, Int(static_cast<long>(m))));
    for (Index k = run.start; k < run.start + run.length; ++k) terms.emplace_back(eval_character(u, k.get_ui()), c);
  }
  bool ok = true;
  std::uint64_t count = 0;
  for_each_element(g, [&](const Coords& x) {
    ++count;
    i128 acc = pn(g, s.base_char, x);
    for (const auto& [chi, c] : terms) acc += static_cast<i128>(c) * pn(g, chi, x);
    if (mod_i128(acc, m) != 0) ok = false;
  });
  if (checked) *checked = count;
  return ok;
}

Separator::Separator(FiniteEventuallyPeriodic u) : u_(std::move(u)) {}

const Separator::Context& Separator::context(std::size_t depth, std::int64_t modulus) {
  auto key = std::make_pair(depth, modulus);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  LiSubgroup li = li_subgroup(u_, depth, modulus);
  Subgroup perp = annihilator(li.l);
  return cache_.emplace(key, Context{std::move(li), std::move(perp)}).first->second;
}

SeparatingCharacter Separator::separate(const Coords& x0, const std::vector<CirclePoint>& claim) {
  const FinAbGroup& g = u_.group;
  const Coords x = g.reduce(x0);
  const std::int64_t m = g.exponent();
  std::size_t i = 0;
  for (std::size_t k = 1; k <= claim.size(); ++k) {
    if (!(claim[k - 1] == rational_point(pn(g, eval_character(u_, k), x), m))) {
      i = k;
      break;
    }
  }
  if (i == 0) {
    throw PreconditionViolation("the point lies on the graph through depth " + std::to_string(claim.size()) +
                                "; no separator exists at this depth");
  }
  SeparatingCharacter out;
  out.index = i;
  const CirclePoint& zi = claim[i - 1];
  if (!zi.is_rational()) {
    out.base_char = g.neg(eval_character(u_, i));
    out.tail = ZInfElem::unit(Index(static_cast<unsigned long>(i)));
    out.modulus = m;
    out.fallback = true;
  } else {
    const Int den = zi.value().get_den();
    const std::int64_t big = to_i64(lcm(Int(static_cast<long>(m)), den));
    const Context& ctx = context(i, big);
    const FinAbGroup& prod = ctx.li.product;
    const std::int64_t e = prod.exponent();
    const std::size_t r = g.rank();
    Coords p(prod.rank(), 0);
    for (std::size_t j = 0; j < r; ++j) p[j] = x[j];
    for (std::size_t k = 1; k <= i; ++k) {
      const Rat scaled = claim[k - 1].value() * Rat(static_cast<long>(big));
      p[r + k - 1] = to_i64(scaled.get_num());  // scaled is an integer by choice of big
    }
    std::vector<std::int64_t> w(prod.rank());
    for (std::size_t j = 0; j < prod.rank(); ++j) w[j] = mod_i128(static_cast<i128>(p[j]) * (e / prod.factors()[j]), e);
    auto chi = lex_min_outside_kernel(ctx.perp, w, e);
    if (!chi) throw Error("internal: annihilator of L_" + std::to_string(i) + " does not separate the point");
    out.base_char.assign(chi->begin(), chi->begin() + static_cast<std::ptrdiff_t>(r));
    std::map<Index, Int> tail;
    for (std::size_t k = 1; k <= i; ++k) {
      if ((*chi)[r + k - 1] != 0) tail[Index(static_cast<unsigned long>(k))] = Int(static_cast<long>((*chi)[r + k - 1]));
    }
    out.tail = ZInfElem::from_map(tail);
    out.modulus = big;
  }
  out.value = separator_value(u_, out, x, claim);
  const bool nonzero = !(out.value == CirclePoint());
  out.verified = verify_annihilates_graph(u_, out, &out.checked) && nonzero;
  return out;
}

SeparatingCharacter separate_point(const FiniteEventuallyPeriodic& u, const Coords& x,
                                   const std::vector<CirclePoint>& trace_claim) {
  Separator s(u);
  return s.separate(x, trace_claim);
}

// G_u^perp ---------------------------------------------------------------------------------------

bool in_gu_perp(const FiniteEventuallyPeriodic& u, const Coords& y, const ZInfElem& s) {
  const FinAbGroup& g = u.group;
  Coords acc = g.reduce(y);
  for (const auto& run : s.runs()) {
    const std::int64_t c = to_i64(mod_floor(run.coeff, Int(static_cast<long>(g.exponent()))));
    for (Index k = run.start; k < run.start + run.length; ++k) acc = g.add(acc, g.scale(c, eval_character(u, k.get_ui())));
  }
  return acc == g.zero();
}

bool in_generated_perp(const FiniteEventuallyPeriodic& u, std::size_t l, const Coords& y, const ZInfElem& s) {
  if (!s.is_zero() && *s.max_support() > Index(static_cast<unsigned long>(l))) return false;
  // The tail fixes the coefficient of every generator (-u_k; e_k).
  const FinAbGroup& g = u.group;
  Coords expected = g.zero();
  for (const auto& run : s.runs()) {
    const std::int64_t c = to_i64(mod_floor(run.coeff, Int(static_cast<long>(g.exponent()))));
    for (Index k = run.start; k < run.start + run.length; ++k)
      expected = g.add(expected, g.scale(c, g.neg(eval_character(u, k.get_ui()))));
  }
  return g.reduce(y) == expected;
}

PerpReport gu_perp_generators(const FiniteEventuallyPeriodic& u, std::size_t l) {
  const FinAbGroup& g = u.group;
  if (!(su_finite(g, u) == Subgroup::whole(g))) {
    throw PreconditionViolation("s_u(Y) = " + su_finite(g, u).str() + " is not all of " + g.str() +
                                "; restrict to the closure first");
  }
  PerpReport out;
  for (std::size_t k = 1; k <= l; ++k) {
    out.generators.push_back(PerpGenerator{g.neg(eval_character(u, k)), ZInfElem::unit(Index(static_cast<unsigned long>(k)))});
  }
  out.annihilates = true;
  const std::int64_t m = g.exponent();
  for_each_element(g, [&](const Coords& y) {
    for (std::size_t k = 1; k <= l; ++k) {
      const auto& gen = out.generators[k - 1];
      ++out.points_checked;
      if (mod_floor(pn(g, gen.base_char, y) + pn(g, eval_character(u, k), y), m) != 0) out.annihilates = false;
    }
  });
  out.relation_holds = true;
  out.plus_sign_holds = true;
  for (std::size_t n = 1; n <= l; ++n) {
    const Coords un = eval_character(u, n);
    const ZInfElem en = ZInfElem::unit(Index(static_cast<unsigned long>(n)));
    if (!in_generated_perp(u, l, un, -en)) out.relation_holds = false;
    if (!in_generated_perp(u, l, un, en)) out.plus_sign_holds = false;
  }
  return out;
}

Closure restrict_to_closure(const FiniteEventuallyPeriodic& u) {
  Subgroup y = su_finite(u.group, u);
  Subgroup::Abstract abs = y.as_abstract();
  FiniteEventuallyPeriodic r{abs.group, {}, {}};
  for (const Coords& chi : u.prefix) r.prefix.push_back(restrict_character(u.group, abs, chi));
  for (const Coords& chi : u.period) r.period.push_back(restrict_character(u.group, abs, chi));
  return Closure{std::move(y), std::move(r)};
}

// A(k, m) ------------------------------------------------------------------------------------------

namespace {

template <class V, class Term, class Combine>
std::map<V, std::uint64_t> akm_generic(std::uint64_t k, std::uint64_t m, std::uint64_t n, std::uint64_t budget,
                                       Term term, Combine combine) {
  if (k < 1) throw InvalidArgument("A(k, m) needs k >= 1");
  std::map<V, std::uint64_t> best;
  auto relax = [&](std::map<V, std::uint64_t>& into, V v, std::uint64_t cost) {
    auto [it, inserted] = into.try_emplace(std::move(v), cost);
    if (!inserted && cost < it->second) it->second = cost;
    if (into.size() > budget) throw BudgetExceeded("A(k, m) enumeration exceeded " + std::to_string(budget) + " values");
  };
  for (std::uint64_t r = m; r <= n; ++r) {
    const V t = term(r);
    std::map<V, std::uint64_t> next = best;
    for (std::uint64_t a = 1; a <= k; ++a) {
      for (int sgn : {1, -1}) {
        const std::int64_t c = sgn * static_cast<std::int64_t>(a);
        relax(next, combine(std::nullopt, c, t), a);
        for (const auto& [v, cost] : best)
          if (cost + a <= k) relax(next, combine(std::optional<V>(v), c, t), cost + a);
      }
    }
    best = std::move(next);
  }
  return best;
}

}  // namespace

std::map<Int, std::uint64_t> akm_costs(const SeqSpec& u, std::uint64_t k, std::uint64_t m, std::uint64_t n,
                                       std::uint64_t budget) {
  if (const auto* f = std::get_if<FiniteEventuallyPeriodic>(&u)) {
    (void)f;
    throw InvalidArgument("use the group-valued overload for finite sequences");
  }
  return akm_generic<Int>(
      k, m, n, budget, [&](std::uint64_t r) { return eval_term(u, r); },
      [](const std::optional<Int>& v, std::int64_t c, const Int& t) {
        Int x = Int(static_cast<long>(c)) * t;
        return v ? Int(*v + x) : x;
      });
}

std::map<Coords, std::uint64_t> akm_costs(const FiniteEventuallyPeriodic& u, std::uint64_t k, std::uint64_t m,
                                          std::uint64_t n, std::uint64_t budget) {
  const FinAbGroup& g = u.group;
  return akm_generic<Coords>(
      k, std::max<std::uint64_t>(m, 1), n, budget, [&](std::uint64_t r) { return eval_character(u, r); },
      [&](const std::optional<Coords>& v, std::int64_t c, const Coords& t) {
        Coords x = g.scale(c, t);
        return v ? g.add(*v, x) : x;
      });
}

std::set<Int> enumerate_akm(const SeqSpec& u, std::uint64_t k, std::uint64_t m, std::uint64_t n, std::uint64_t budget) {
  std::set<Int> out;
  for (const auto& [v, c] : akm_costs(u, k, m, n, budget)) out.insert(v);
  return out;
}

std::set<Coords> enumerate_akm(const FiniteEventuallyPeriodic& u, std::uint64_t k, std::uint64_t m, std::uint64_t n,
                               std::uint64_t budget) {
  std::set<Coords> out;
  for (const auto& [v, c] : akm_costs(u, k, m, n, budget)) out.insert(v);
  return out;
}

AkmCover akm_exhaustion(const SeqSpec& u, const std::vector<Int>& targets, std::uint64_t k_max, std::uint64_t n) {
  AkmCover out;
  auto costs = akm_costs(u, k_max, 0, n);
  std::uint64_t k = 1;
  for (const Int& t : targets) {
    if (t == 0) continue;  // 0 lies in A* by convention
    auto it = costs.find(t);
    if (it == costs.end()) {
      out.uncovered = t;
      return out;
    }
    k = std::max(k, it->second);
  }
  out.found = true;
  out.k = k;
  return out;
}

// Neighborhoods ----------------------------------------------------------------------------------------

namespace {

// Residues of u_l mod q over l >= from.
std::vector<bool> tail_residues(const SeqSpec& u, const Orbit& orbit, std::uint64_t from, std::uint64_t q) {
  std::vector<bool> seen(q, false);
  const Int qq(static_cast<unsigned long>(q));
  for (std::uint64_t l = from; l < orbit.preperiod; ++l) seen[mod_floor(eval_term(u, l), qq).get_ui()] = true;
  for (const Int& r : orbit.cycle) seen[r.get_ui()] = true;
  return seen;
}

// gcd of every u_l with l >= from, confirmed on the residue orbit.
std::optional<Int> tail_gcd(const SeqSpec& u, std::uint64_t from) {
  Int g = 0;
  for (std::uint64_t l = from; l < from + 64; ++l) g = gcd(g, eval_term(u, l));
  if (g < 2) return std::nullopt;
  try {
    Orbit orbit = residue_orbit(u, g, 100'000);
    for (const Int& r : orbit.cycle)
      if (r != 0) return std::nullopt;
    for (std::uint64_t l = from; l < orbit.preperiod; ++l)
      if (mod_floor(eval_term(u, l), g) != 0) return std::nullopt;
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
  return g;
}

std::optional<Int> modular_certificate(const SeqSpec& u, const std::vector<std::uint64_t>& cutoffs, const Int& y) {
  const std::uint64_t lowest = *std::min_element(cutoffs.begin(), cutoffs.end());
  if (auto g = tail_gcd(u, lowest); g && mod_floor(y, *g) != 0) return *g;
  for (std::uint64_t q = 2; q <= 256; ++q) {
    Orbit orbit;
    try {
      orbit = residue_orbit(u, Int(static_cast<unsigned long>(q)), 100'000);
      if (orbit.preperiod > 10'000) continue;
    } catch (const BudgetExceeded&) {
      continue;
    }
    std::vector<bool> sums(q, false);
    sums[0] = true;
    for (std::uint64_t c : cutoffs) {
      std::vector<bool> res = tail_residues(u, orbit, c, q);
      std::vector<bool> next(q, false);
      for (std::uint64_t s = 0; s < q; ++s) {
        if (!sums[s]) continue;
        next[s] = true;
        for (std::uint64_t r = 0; r < q; ++r) {
          if (!res[r]) continue;
          next[(s + r) % q] = true;
          next[(s + q - r) % q] = true;
        }
      }
      sums = std::move(next);
    }
    if (!sums[mod_floor(y, Int(static_cast<unsigned long>(q))).get_ui()]) return Int(static_cast<unsigned long>(q));
  }
  return std::nullopt;
}

}  // namespace

NeighborhoodResult neighborhood_member(const SeqSpec& u, const std::vector<std::uint64_t>& cutoffs, const Int& y,
                                       std::uint64_t depth, std::uint64_t budget) {
  if (is_finite_sequence(u)) throw InvalidArgument("neighborhoods are built for integer sequences");
  if (cutoffs.empty()) throw InvalidArgument("at least one cutoff is needed");
  NeighborhoodResult out{Unknown{depth, ""}, {}, std::nullopt, 0};
  const std::size_t d = cutoffs.size();
  if (y == 0) {
    for (std::uint64_t c : cutoffs) out.decomposition.push_back(DecompositionTerm{c, c, 0});
    out.verdict = In{Int(0), "0 lies in every A*"};
    return out;
  }
  if (!std::holds_alternative<ExplicitPrefix>(u)) {
    if (auto q = modular_certificate(u, cutoffs, y)) {
      out.certificate_modulus = *q;
      out.verdict = NotIn{Rat(0), "y mod " + q->get_str() + " is not a sum of admissible residues", *q, Int(0), {}};
      return out;
    }
  }
  std::uint64_t max_index = depth;
  if (const auto* e = std::get_if<ExplicitPrefix>(&u)) {
    if (e->terms.empty()) return out;
    max_index = std::min<std::uint64_t>(depth, e->terms.size() - 1);
  }
  std::vector<Int> terms;
  for (std::uint64_t l = 0; l <= max_index; ++l) terms.push_back(eval_term(u, l));

  std::vector<DecompositionTerm> cur(d);
  bool exhausted = false;
  for (std::uint64_t h = *std::min_element(cutoffs.begin(), cutoffs.end()); h <= max_index && !exhausted; ++h) {
    // bound[i] = sum over j >= i of max |u_l|, l in [n_j, h]
    std::vector<Int> bound(d + 1, Int(0));
    for (std::size_t i = d; i-- > 0;) {
      Int mx = 0;
      for (std::uint64_t l = cutoffs[i]; l <= h; ++l) mx = std::max(mx, Int(abs(terms[l])));
      bound[i] = bound[i + 1] + mx;
    }
    std::function<bool(std::size_t, const Int&)> dfs = [&](std::size_t i, const Int& rest) -> bool {
      if (++out.nodes > budget) {
        exhausted = true;
        return false;
      }
      if (i == d) return rest == 0;
      if (abs(rest) > bound[i]) return false;
      cur[i] = DecompositionTerm{cutoffs[i], cutoffs[i], 0};
      if (dfs(i + 1, rest)) return true;
      for (std::uint64_t l = cutoffs[i]; l <= h; ++l) {
        if (terms[l] == 0) continue;
        for (int sgn : {1, -1}) {
          cur[i] = DecompositionTerm{cutoffs[i], l, sgn};
          if (dfs(i + 1, rest - Int(sgn) * terms[l])) return true;
          if (exhausted) return false;
        }
      }
      return false;
    };
    if (dfs(0, y)) {
      out.decomposition = cur;
      out.verdict = In{Int(static_cast<unsigned long>(h)), "explicit decomposition with indices up to " + std::to_string(h)};
      return out;
    }
  }
  out.verdict = Unknown{depth, exhausted ? "node budget exhausted" : "no decomposition with indices up to the depth"};
  return out;
}

bool check_decomposition(const SeqSpec& u, const std::vector<std::uint64_t>& cutoffs, const Int& y,
                         const std::vector<DecompositionTerm>& terms) {
  if (terms.size() != cutoffs.size()) return false;
  Int s = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (t.cutoff != cutoffs[i]) return false;
    if (t.sign == 0) continue;
    if (t.index < cutoffs[i] || (t.sign != 1 && t.sign != -1)) return false;
    s += Int(t.sign) * eval_term(u, t.index);
  }
  return s == y;
}

// Continuity ---------------------------------------------------------------------------------------------

ContinuityReport continuity_certificate(const SeqSpec& u, const CirclePoint& x, const Rat& eps,
                                        std::uint64_t sample_budget, std::uint64_t levels, std::uint64_t seed) {
  if (eps <= 0) throw InvalidArgument("epsilon must be positive");
  ContinuityReport out{member_su(u, x), {}, 0, false, Rat(0)};
  const In* in = std::get_if<In>(&out.membership);
  if (!in) return out;
  std::uint64_t start = in->cutoff.get_ui();
  if (eventually_zero(u) && !(x.is_rational() && x.value() == 0)) {
    // The certificate only says "eventually"; locate the first run of zeros.
    std::size_t window = 1;
    if (const auto* r = std::get_if<LinearRecurrence>(&u)) window = r->coeffs.size();
    start = 0;
    for (std::uint64_t n = 0; n < 100000; ++n) {
      bool zero = true;
      for (std::size_t i = 0; i < window && zero; ++i) zero = eval_term(u, n + i) == 0;
      if (zero) {
        start = n;
        break;
      }
    }
  }
  for (std::uint64_t k = 0; k < levels; ++k) out.cutoffs.push_back(start + k);

  out.all_below = true;
  for (std::uint64_t k = 0; k < levels; ++k) {
    const Rat level_eps = eps / Rat(pow2(k + 1));
    for (std::uint64_t l = out.cutoffs[k]; l < out.cutoffs[k] + 16; ++l) {
      if (!(chord_distance(pair(eval_term(u, l), x)).upper() < level_eps)) out.all_below = false;
    }
  }
  std::mt19937_64 rng(seed);
  for (std::uint64_t s = 0; s < sample_budget; ++s) {
    Int y = 0;
    for (std::uint64_t k = 0; k < levels; ++k) {
      const int sgn = static_cast<int>(rng() % 3) - 1;
      const std::uint64_t l = out.cutoffs[k] + rng() % 16;
      y += Int(sgn) * eval_term(u, l);
    }
    const Rat c = chord_distance(pair(y, x)).upper();
    out.max_chord_upper = std::max(out.max_chord_upper, c);
    if (!(c < eps)) out.all_below = false;
    ++out.samples;
  }
  return out;
}

}  // namespace charsub
