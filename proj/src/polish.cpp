#include "charsub/polish.hpp"

#include <algorithm>
#include <mutex>
#include <set>

namespace charsub {

namespace {

Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

bool is_zero_point(const CirclePoint& x) { return x.is_rational() && x.value() == 0; }

// Enclosure of x in [0, 1) with width <= 2^-bits.
Interval point_enclosure(const CirclePoint& x, unsigned bits) {
  if (x.is_rational()) return {x.value(), x.value()};
  return x.refine(bits);
}

Interval add(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval scale(const Int& c, const Interval& a) {
  Rat r(c);
  return c >= 0 ? Interval{r * a.lo, r * a.hi} : Interval{r * a.hi, r * a.lo};
}

unsigned bits_for(std::uint64_t count) {
  unsigned b = 1;
  while ((std::uint64_t{1} << b) < count + 1 && b < 63) ++b;
  return b;
}

// Enclosure of H_b - H_{a-1} = sum_{n=a}^{b} 1/n, a >= 1.
Interval harmonic_range(const Int& a, const Int& b, unsigned bits) {
  if (b < a) return {Rat(0), Rat(0)};
  if (b - a < 4096) {
    Rat s = 0;
    for (Int n = a; n <= b; ++n) s += Rat(Int(1), n);
    s.canonicalize();
    return {s, s};
  }
  if (a < 64) {
    Interval head = harmonic_range(a, Int(63), bits);
    return add(head, harmonic_range(Int(64), b, bits));
  }
  // Euler-Maclaurin: H_n = ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4)
  // - 1/(252n^6) + 1/(240n^8) + R_n, with R_n between 0 and -1/(132n^10).
  const Int lo_n = a - 1;
  auto series = [](const Int& n) -> Rat {
    Rat x(Int(1), n);
    Rat x2 = x * x;
    Rat x4 = x2 * x2;
    return x / 2 - x2 / 12 + x4 / 120 - x4 * x2 / 252 + x4 * x4 / 240;
  };
  auto next_term = [](const Int& n) -> Rat {
    Rat x(Int(1), n);
    Rat x2 = x * x;
    Rat x4 = x2 * x2;
    return -(x4 * x4 * x2) / 132;
  };
  Interval ln = log_enclosure(Rat(b) / Rat(lo_n), bits + 4);
  Rat t = series(b) - series(lo_n);
  Rat rb = next_term(b), ra = next_term(lo_n);  // both negative
  Interval rem{rb, -ra};
  return round_outward({ln.lo + t + rem.lo, ln.hi + t + rem.hi}, bits + 2);
}

template <class Fn>
Index lower_bound_index(Index lo, Index hi, Fn pred) {  // first x in [lo, hi) with pred(x), else hi
  while (lo < hi) {
    Index mid = (lo + hi) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

// ZInfElem ------------------------------------------------------------------------------

ZInfElem ZInfElem::from_runs(std::vector<Run> runs) {
  std::map<Index, Int> delta;
  for (const Run& r : runs) {
    if (r.start < 1) throw InvalidArgument("positions start at 1");
    if (r.length < 1) throw InvalidArgument("runs must be nonempty");
    if (r.coeff == 0) continue;
    delta[r.start] += r.coeff;
    delta[r.start + r.length] -= r.coeff;
  }
  ZInfElem out;
  Int cur = 0;
  Index prev;
  for (const auto& [pos, d] : delta) {
    if (cur != 0) {
      Run run{prev, pos - prev, cur};
      if (!out.runs_.empty() && out.runs_.back().coeff == cur &&
          out.runs_.back().start + out.runs_.back().length == prev) {
        out.runs_.back().length += run.length;
      } else {
        out.runs_.push_back(run);
      }
    }
    cur += d;
    prev = pos;
  }
  return out;
}

ZInfElem ZInfElem::unit(const Index& k, const Int& coeff) { return from_runs({Run{k, Index(1), coeff}}); }

ZInfElem ZInfElem::indicator(const Index& a, const Index& b) {
  if (b < a) return ZInfElem();
  return from_runs({Run{a, b - a + 1, Int(1)}});
}

ZInfElem ZInfElem::from_map(const std::map<Index, Int>& coeffs) {
  std::vector<Run> runs;
  for (const auto& [k, c] : coeffs) runs.push_back(Run{k, Index(1), c});
  return from_runs(std::move(runs));
}

Int ZInfElem::coeff(const Index& k) const {
  for (const Run& r : runs_) {
    if (k < r.start) break;
    if (k < r.start + r.length) return r.coeff;
  }
  return 0;
}

std::optional<Index> ZInfElem::min_support() const {
  if (runs_.empty()) return std::nullopt;
  return runs_.front().start;
}

std::optional<Index> ZInfElem::max_support() const {
  if (runs_.empty()) return std::nullopt;
  return runs_.back().start + runs_.back().length - 1;
}

Index ZInfElem::support_size() const {
  Index s = 0;
  for (const Run& r : runs_) s += r.length;
  return s;
}

Int ZInfElem::l1() const {
  Int s = 0;
  for (const Run& r : runs_) s += abs_int(r.coeff) * r.length;
  return s;
}

Int ZInfElem::l2_squared() const {
  Int s = 0;
  for (const Run& r : runs_) s += r.coeff * r.coeff * r.length;
  return s;
}

Int ZInfElem::linf() const {
  Int s = 0;
  for (const Run& r : runs_) s = std::max(s, abs_int(r.coeff));
  return s;
}

std::map<Index, Int> ZInfElem::to_map(std::uint64_t cap) const {
  if (support_size() > Int(static_cast<unsigned long>(cap))) throw BudgetExceeded("support too large to expand");
  std::map<Index, Int> out;
  for (const Run& r : runs_)
    for (Index k = r.start; k < r.start + r.length; ++k) out[k] = r.coeff;
  return out;
}

ZInfElem ZInfElem::operator+(const ZInfElem& other) const {
  std::vector<Run> all = runs_;
  all.insert(all.end(), other.runs_.begin(), other.runs_.end());
  return from_runs(std::move(all));
}

ZInfElem ZInfElem::operator-() const { return scaled(Int(-1)); }

ZInfElem ZInfElem::scaled(const Int& k) const {
  if (k == 0) return ZInfElem();
  ZInfElem out = *this;
  for (Run& r : out.runs_) r.coeff *= k;
  return out;
}

std::string ZInfElem::str() const {
  std::string s = "zinf{";
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    if (i) s += ", ";
    const Run& r = runs_[i];
    if (r.length == 1) {
      s += r.start.get_str();
    } else {
      s += r.start.get_str() + ".." + Index(r.start + r.length - 1).get_str();
    }
    s += ": " + r.coeff.get_str();
  }
  return s + "}";
}

// TInfElem ----------------------------------------------------------------------------------

TInfElem TInfElem::finite(std::map<Index, CirclePoint> entries) {
  TInfElem out;
  for (auto& [k, v] : entries) {
    if (k < 1) throw InvalidArgument("positions start at 1");
    if (!is_zero_point(v)) out.entries_.emplace(k, v);
  }
  return out;
}

TInfElem TInfElem::pattern(std::shared_ptr<const PatternRule> rule, Verdict tends_to_1, Verdict l1_summable) {
  if (!rule || !rule->entry) throw InvalidArgument("pattern needs an entry rule");
  TInfElem out;
  out.rule_ = std::move(rule);
  out.tends_ = std::move(tends_to_1);
  out.l1_ = std::move(l1_summable);
  return out;
}

namespace {

Index first_entry_index(const PatternRule& rule, const Index& n) {
  if (rule.first_entry_at_or_after) return rule.first_entry_at_or_after(n);
  Index m = 0;
  while (true) {
    auto e = rule.entry(m);
    if (!e || e->first >= n) return m;
    ++m;
  }
}

}  // namespace

CirclePoint TInfElem::at(const Index& n) const {
  if (!rule_) {
    auto it = entries_.find(n);
    return it == entries_.end() ? CirclePoint() : it->second;
  }
  auto e = rule_->entry(first_entry_index(*rule_, n));
  if (e && e->first == n) return e->second;
  return CirclePoint();
}

std::vector<std::pair<Index, CirclePoint>> TInfElem::entries_in(const Index& a, const Index& b,
                                                                std::uint64_t cap) const {
  std::vector<std::pair<Index, CirclePoint>> out;
  if (b < a) return out;
  if (!rule_) {
    for (auto it = entries_.lower_bound(a); it != entries_.end() && it->first <= b; ++it) {
      if (out.size() >= cap) throw BudgetExceeded("too many entries in range");
      out.emplace_back(*it);
    }
    return out;
  }
  for (Index m = first_entry_index(*rule_, a);; ++m) {
    auto e = rule_->entry(m);
    if (!e || e->first > b) break;
    if (out.size() >= cap) throw BudgetExceeded("too many entries in range");
    out.push_back(std::move(*e));
  }
  return out;
}

std::vector<std::pair<Index, CirclePoint>> TInfElem::first_entries(std::uint64_t count) const {
  std::vector<std::pair<Index, CirclePoint>> out;
  if (!rule_) {
    for (const auto& e : entries_) {
      if (out.size() >= count) break;
      out.push_back(e);
    }
    return out;
  }
  for (std::uint64_t m = 0; m < count; ++m) {
    auto e = rule_->entry(Index(static_cast<unsigned long>(m)));
    if (!e) break;
    out.push_back(std::move(*e));
  }
  return out;
}

Interval TInfElem::argument_sum(const Index& a, const Index& b, unsigned bits) const {
  if (b < a) return {Rat(0), Rat(0)};
  if (rule_ && rule_->argument_sum) return rule_->argument_sum(a, b, bits);
  auto entries = entries_in(a, b);
  const unsigned extra = bits_for(entries.size());
  Interval s{Rat(0), Rat(0)};
  for (const auto& [k, v] : entries) s = add(s, point_enclosure(v, bits + extra));
  return s;
}

std::string TInfElem::str() const {
  if (rule_) return rule_->name;
  std::string s = "tinf{";
  bool first = true;
  for (const auto& [k, v] : entries_) {
    if (!first) s += ", ";
    first = false;
    s += k.get_str() + ": " + v.str();
  }
  return s + "}";
}

TInfElem harmonic_pattern(const Int& c, const Index& start) {
  if (c < 1) throw InvalidArgument("harmonic pattern needs C >= 1");
  // With C = 1 the coordinate at n = 1 is 1/1 = 0 mod 1.
  Index s = start < 1 ? Index(1) : start;
  if (c == 1 && s < 2) s = 2;
  auto rule = std::make_shared<PatternRule>();
  rule->name = "block(rule=harmonic, C=" + c.get_str() + (start > 1 ? ", start=" + start.get_str() : "") + ")";
  rule->entry = [c, s](const Index& m) -> std::optional<std::pair<Index, CirclePoint>> {
    Index n = s + m;
    return std::make_pair(n, CirclePoint::rational(make_rat(Int(1), c * n)));
  };
  rule->first_entry_at_or_after = [s](const Index& n) { return n <= s ? Index(0) : Index(n - s); };
  rule->argument_sum = [c, s](const Index& a, const Index& b, unsigned bits) {
    Index lo = a < s ? s : a;
    Interval h = harmonic_range(lo, b, bits + 4);
    return round_outward({h.lo / Rat(c), h.hi / Rat(c)}, bits + 2);
  };
  rule->tail_index = [c, s](const Rat& bound) -> std::optional<Index> {
    if (bound <= 0) return std::nullopt;
    Index k = floor_rat(Rat(1) / (Rat(c) * bound));
    return std::max(k, Index(s - 1));
  };
  rule->tail_norm_bound = [c, s](const Index& after) -> std::optional<Rat> {
    Index n = after + 1 < s ? s : Index(after + 1);
    return make_rat(Int(1), c * n);
  };
  return TInfElem::pattern(rule, In{s, "eps_n = 1/(C n) -> 0"},
                           NotIn{make_rat(Int(4), c), "sum chord(eps_n) >= (4/C) sum 1/n diverges", Int(0), s, {}});
}

TInfElem constant_pattern(const CirclePoint& v, const Index& start) {
  if (is_zero_point(v)) return TInfElem();
  Index s = start < 1 ? Index(1) : start;
  auto rule = std::make_shared<PatternRule>();
  rule->name = "block(rule=constant, value=" + v.str() + (s > 1 ? ", start=" + s.get_str() : "") + ")";
  rule->entry = [v, s](const Index& m) -> std::optional<std::pair<Index, CirclePoint>> {
    return std::make_pair(Index(s + m), v);
  };
  rule->first_entry_at_or_after = [s](const Index& n) { return n <= s ? Index(0) : Index(n - s); };
  if (v.is_rational()) {
    Rat val = v.value();
    rule->argument_sum = [val, s](const Index& a, const Index& b, unsigned) {
      Index lo = a < s ? s : a;
      Rat sum = b < lo ? Rat(0) : Rat(b - lo + 1) * val;
      return Interval{sum, sum};
    };
  }
  NormValue nv = circle_norm(v);
  Rat delta = nv.lower();
  return TInfElem::pattern(rule, NotIn{delta, "constant nonzero coordinate", Int(0), s, {}},
                           NotIn{delta, "constant nonzero coordinate", Int(0), s, {}});
}

// Metrics ----------------------------------------------------------------------------------------

std::string MetricResult::str() const {
  switch (kind) {
    case Kind::Value:
      if (value.lo == value.hi) return to_string(value.lo);
      return "[" + std::to_string(value.lo.get_d()) + ", " + std::to_string(value.hi.get_d()) + "]";
    case Kind::Diverges:
      return "diverges (partial sum > " + to_string(partial_lower) + " by position " + witness_position.get_str() + ")";
    default:
      return "unknown: " + reason;
  }
}

namespace {

bool identical(const TInfElem& z, const TInfElem& w) {
  if (z.is_finite() != w.is_finite()) return false;
  if (!z.is_finite()) return z.rule() == w.rule();
  if (z.finite_entries().size() != w.finite_entries().size()) return false;
  auto it = w.finite_entries().begin();
  for (const auto& [k, v] : z.finite_entries()) {
    if (it->first != k || !(it->second == v)) return false;
    ++it;
  }
  return true;
}

// Nonzero coordinates of one element, in position order.
struct Cursor {
  const TInfElem* e;
  std::map<Index, CirclePoint>::const_iterator it;
  Index m = 0;
  std::optional<std::pair<Index, CirclePoint>> cur;

  explicit Cursor(const TInfElem& x) : e(&x), it(x.finite_entries().begin()) { load(); }
  void load() {
    if (e->is_finite()) {
      cur.reset();
      if (it != e->finite_entries().end()) cur = *it;
    } else {
      cur = e->rule()->entry(m);
    }
  }
  void advance() {
    if (e->is_finite())
      ++it;
    else
      ++m;
    load();
  }
};

// Visits chord(z_k - w_k) over the union of supports in position order. Stops
// after `depth` entries of a pattern argument; `horizon` is then the last
// position visited and every position up to it has been covered.
template <class Visit>
void walk_chords(const TInfElem& z, const TInfElem& w, std::uint64_t depth, Index& horizon, bool& truncated,
                 Visit visit) {
  Cursor cz(z), cw(w);
  std::uint64_t taken_z = 0, taken_w = 0;
  truncated = false;
  horizon = -1;
  while (cz.cur || cw.cur) {
    Index k;
    if (cz.cur && cw.cur)
      k = std::min(cz.cur->first, cw.cur->first);
    else
      k = cz.cur ? cz.cur->first : cw.cur->first;
    CirclePoint vz, vw;
    bool hit_z = cz.cur && cz.cur->first == k, hit_w = cw.cur && cw.cur->first == k;
    if (hit_z) vz = cz.cur->second;
    if (hit_w) vw = cw.cur->second;
    horizon = k;
    if (!visit(k, chord_distance(vz - vw))) return;
    if (hit_z) {
      cz.advance();
      if (!z.is_finite() && ++taken_z >= depth) truncated = true;
    }
    if (hit_w) {
      cw.advance();
      if (!w.is_finite() && ++taken_w >= depth) truncated = true;
    }
    if (truncated) return;
  }
}

}  // namespace

MetricResult metric_d0(const TInfElem& z, const TInfElem& w, std::uint64_t depth) {
  MetricResult out;
  if (identical(z, w)) {
    out.kind = MetricResult::Kind::Value;
    out.exact = true;
    return out;
  }
  if (!is_in(z.tends_to_1()) || !is_in(w.tends_to_1())) {
    out.reason = "sup over a tail that does not tend to 1 needs tail analysis";
    return out;
  }
  Index horizon;
  bool truncated;
  Rat lo = 0, hi = 0;
  bool exact = true;
  walk_chords(z, w, depth, horizon, truncated, [&](const Index&, const ChordValue& c) {
    lo = std::max(lo, c.lower());
    hi = std::max(hi, c.upper());
    if (c.lower() != c.upper()) exact = false;
    return true;
  });
  if (truncated) {
    Rat tail = 0;
    for (const TInfElem* e : {&z, &w}) {
      if (e->is_finite()) continue;
      if (!e->rule()->tail_norm_bound) {
        out.reason = "no tail bound for " + e->str();
        return out;
      }
      auto b = e->rule()->tail_norm_bound(horizon);
      if (!b) {
        out.reason = "no tail bound for " + e->str();
        return out;
      }
      tail += *b;
    }
    // chord(t) <= 2 pi ||t||
    Rat tail_chord = tail * 2 * pi_enclosure(30).hi;
    hi = std::max(hi, tail_chord);
    exact = false;
  }
  out.kind = MetricResult::Kind::Value;
  out.value = {lo, hi};
  out.exact = exact && lo == hi;
  return out;
}

MetricResult metric_d1(const TInfElem& z, const TInfElem& w, std::uint64_t depth, const Rat& bound) {
  MetricResult out;
  if (identical(z, w)) {
    out.kind = MetricResult::Kind::Value;
    out.exact = true;
    return out;
  }
  const bool zs = is_in(z.l1_summable()), ws = is_in(w.l1_summable());
  const bool zn = is_not_in(z.l1_summable()), wn = is_not_in(w.l1_summable());
  if (zs && ws) {
    Index horizon;
    bool truncated;
    Interval sum{Rat(0), Rat(0)};
    walk_chords(z, w, depth, horizon, truncated, [&](const Index&, const ChordValue& c) {
      sum = add(sum, c.enclosure);
      return true;
    });
    if (truncated) {
      for (const TInfElem* e : {&z, &w}) {
        if (e->is_finite()) continue;
        std::optional<Rat> t;
        if (e->rule()->l1_tail_bound) t = e->rule()->l1_tail_bound(horizon);
        if (!t) {
          out.reason = "no l1 tail bound for " + e->str();
          return out;
        }
        sum.hi += *t;
      }
    }
    out.kind = MetricResult::Kind::Value;
    out.value = sum;
    out.exact = sum.lo == sum.hi;
    return out;
  }
  if ((zs && wn) || (zn && ws)) {
    Index horizon;
    bool truncated;
    Rat partial = 0;
    walk_chords(z, w, depth, horizon, truncated, [&](const Index& k, const ChordValue& c) {
      partial += c.lower();
      if (partial <= bound) return true;
      out.kind = MetricResult::Kind::Diverges;
      out.partial_lower = partial;
      out.witness_position = k;
      out.reason = "one argument is l1-summable and the other is not";
      return false;
    });
    if (out.kind == MetricResult::Kind::Diverges) return out;
    out.reason = "partial sums stayed below " + to_string(bound) + " within depth";
    return out;
  }
  out.reason = "summability of the difference is undetermined";
  return out;
}

// Pairing -----------------------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kEnumerateLimit = 100000;

bool run_enumerable(const ZInfElem::Run& r, const TInfElem& z) {
  if (z.is_finite()) return true;
  return r.length <= Int(static_cast<unsigned long>(kEnumerateLimit)) || !z.rule()->argument_sum;
}

}  // namespace

CirclePoint pair_zinf(const ZInfElem& n, const TInfElem& z) {
  bool enumerable = true;
  for (const auto& r : n.runs()) enumerable = enumerable && run_enumerable(r, z);
  if (enumerable) {
    CirclePoint acc;
    for (const auto& r : n.runs()) {
      for (const auto& [k, v] : z.entries_in(r.start, r.start + r.length - 1, 10 * kEnumerateLimit)) {
        acc = acc + pair(r.coeff, v);
      }
    }
    return acc;
  }
  return CirclePoint::from_refiner(
      [n, z](unsigned k) {
        for (unsigned extra = 4; extra < 2048; extra += 16) {
          Interval iv = pair_zinf_enclosure(n, z, k + extra);
          Int f = floor_rat(iv.lo);
          if (floor_rat(iv.hi) != f) continue;
          return round_outward({iv.lo - Rat(f), iv.hi - Rat(f)}, k + 1);
        }
        throw Error("pairing enclosure cannot be separated from an integer");
      },
      "pair(" + n.str() + ", " + z.str() + ")");
}

Interval pair_zinf_enclosure(const ZInfElem& n, const TInfElem& z, unsigned bits) {
  Interval acc{Rat(0), Rat(0)};
  const unsigned extra = bits_for(n.runs().size()) + static_cast<unsigned>(mpz_sizeinbase(n.linf().get_mpz_t(), 2));
  for (const auto& r : n.runs()) {
    Interval s = z.argument_sum(r.start, r.start + r.length - 1, bits + extra);
    acc = add(acc, scale(r.coeff, s));
  }
  return acc;
}

bool f_eps_l_contains(const ZInfElem& chi, const Rat& eps, const Index& l) {
  if (eps <= 0) throw InvalidArgument("epsilon must be positive");
  if (chi.is_zero()) return true;
  if (*chi.min_support() <= l) return false;
  return Rat(chi.l2_squared()) * eps * eps <= 1;
}

// Omega rules ---------------------------------------------------------------------------------------

OmegaRule omega_unit() {
  OmegaRule r;
  r.name = "unit";
  r.term = [](const Index& k) { return ZInfElem::unit(k); };
  r.r1_tail = [](const Index& bound) { return Index(bound + 1); };
  r.coefficient_bound = Int(1);
  r.max_support_upto = [](const Index& k) { return k; };
  return r;
}

OmegaRule omega_scaled() {
  OmegaRule r;
  r.name = "scaled";
  r.term = [](const Index& k) { return ZInfElem::unit(k, k); };
  r.r1_tail = [](const Index& bound) { return Index(bound + 1); };
  r.coefficients_unbounded = true;
  r.max_support_upto = [](const Index& k) { return k; };
  return r;
}

OmegaRule omega_anchored() {
  OmegaRule r;
  r.name = "anchored";
  r.term = [](const Index& k) { return ZInfElem::unit(Index(1)) + ZInfElem::unit(k); };
  r.r1_bounded = true;
  r.coefficient_bound = Int(2);
  r.max_support_upto = [](const Index& k) { return k; };
  return r;
}

OmegaRule omega_prefix(std::vector<ZInfElem> terms) {
  OmegaRule r;
  r.name = "prefix";
  r.length = Index(static_cast<unsigned long>(terms.size()));
  auto shared = std::make_shared<const std::vector<ZInfElem>>(std::move(terms));
  r.term = [shared](const Index& k) {
    if (k < 1 || k > Index(static_cast<unsigned long>(shared->size()))) {
      throw InvalidArgument("index " + k.get_str() + " outside the prefix");
    }
    return (*shared)[k.get_ui() - 1];
  };
  return r;
}

namespace {

Index max_support_upto(const OmegaRule& omega, const Index& k) {
  if (omega.max_support_upto) return omega.max_support_upto(k);
  Index best = 0;
  for (Index i = 1; i <= k; ++i) {
    auto m = omega.term(i).max_support();
    if (m && *m > best) best = *m;
  }
  return best;
}

Index position_of_max(const ZInfElem& t) {
  Int d = t.linf();
  for (const auto& r : t.runs())
    if (abs_int(r.coeff) == d) return r.start;
  throw Error("internal: empty term");
}

}  // namespace

CoefficientAnalysis exa1_coefficient_analysis(const OmegaRule& omega, std::size_t witness_terms,
                                              std::uint64_t scan_cap) {
  CoefficientAnalysis out{Unknown{0, "no certificate"}, Unknown{0, "no certificate"}};
  if (omega.r1_tail) {
    out.r1_divergent = In{Int(0), "r_1^k -> infinity certified by the rule"};
  } else if (omega.r1_bounded) {
    out.r1_divergent = NotIn{Rat(0), "r_1^k stays bounded along a subsequence", Int(0), Int(0), {}};
  } else if (omega.length) {
    out.r1_divergent = Unknown{omega.length->get_ui(), "finite prefix carries no tail information"};
  }

  if (omega.coefficient_bound) {
    out.bound = *omega.coefficient_bound;
  } else if (omega.coefficients_unbounded) {
    UnboundedWitness w;
    Index prev = 0, sep = 0;
    for (std::size_t j = 1; j <= witness_terms; ++j) {
      const Int j2 = Int(static_cast<unsigned long>(j * j));
      bool found = false;
      for (std::uint64_t step = 1; step <= scan_cap; ++step) {
        Index k = prev + step;
        ZInfElem t = omega.term(k);
        if (t.is_zero()) continue;
        if (t.linf() > j2 && *t.min_support() > sep) {
          w.k.push_back(k);
          w.positions.push_back(position_of_max(t));
          w.d.push_back(t.linf());
          prev = k;
          sep = *t.max_support();
          found = true;
          break;
        }
      }
      if (!found) throw BudgetExceeded("no admissible witness term within the scan cap");
    }
    out.bound = w;
  } else if (omega.length) {
    out.bound = Unknown{omega.length->get_ui(), "finite prefix; no uniform bound certified"};
  }
  return out;
}

UnboundedWitnessResult exa1_unbounded_witness(const OmegaRule& omega, const std::vector<Index>& ks) {
  std::map<Index, CirclePoint> entries;
  std::vector<ZInfElem> terms;
  Rat inv_sum = 0;
  for (std::size_t j = 1; j <= ks.size(); ++j) {
    const Index& k = ks[j - 1];
    if (k < 1 || (j > 1 && k <= ks[j - 2])) throw PreconditionViolation("witness indices must increase");
    ZInfElem t = omega.term(k);
    if (t.is_zero()) throw PreconditionViolation("witness term is zero");
    const Int d = t.linf();
    if (d <= Int(static_cast<unsigned long>(j * j))) {
      throw PreconditionViolation("coefficient condition d > j^2 fails at j = " + std::to_string(j));
    }
    if (!terms.empty() && !(*terms.back().max_support() < *t.min_support())) {
      throw PreconditionViolation("support separation fails between j = " + std::to_string(j - 1) + " and " +
                                  std::to_string(j));
    }
    entries.emplace(position_of_max(t), CirclePoint::rational(make_rat(Int(1), 2 * d)));
    inv_sum += Rat(Int(1), d);
    terms.push_back(std::move(t));
  }
  UnboundedWitnessResult out;
  out.z = TInfElem::finite(entries);
  out.l1_bound = pi_enclosure(30).hi * inv_sum;
  out.verified = true;
  for (const ZInfElem& t : terms) {
    CirclePoint p = pair_zinf(t, out.z);
    out.pairings.push_back(p);
    if (!(p == CirclePoint::rational(Rat(1, 2)))) out.verified = false;
  }
  MetricResult l1 = metric_d1(out.z, TInfElem());
  if (l1.kind != MetricResult::Kind::Value || l1.value.hi > out.l1_bound) out.verified = false;
  return out;
}

// Escape witness --------------------------------------------------------------------------------

namespace {

// Lazily extended block selection k_1 < k_2 < ... for an infinite omega.
struct BlockSelection {
  OmegaRule omega;
  Int c;
  std::mutex mu;
  std::vector<Index> k{Index(1)};
  std::vector<Index> positions;

  void extend_to(std::size_t count) {  // k has at least count entries
    while (k.size() < count) {
      Index r = max_support_upto(omega, k.back());
      Index next = omega.r1_tail(r);
      if (next <= k.back()) next = k.back() + 1;
      k.push_back(next);
    }
    while (positions.size() < k.size()) positions.push_back(*omega.term(k[positions.size()]).min_support());
  }
};

}  // namespace

EscapeWitness exa1_escape_witness(const OmegaRule& omega, const Int& c, std::uint64_t blocks,
                                  const Rat& divergence_bound) {
  if (c < 1) throw InvalidArgument("C must be positive");
  if (omega.coefficients_unbounded) throw PreconditionViolation("coefficients are unbounded");
  EscapeWitness out;
  if (omega.length) {
    const Index len = *omega.length;
    Int dmax = 0;
    for (Index i = 1; i <= len; ++i) dmax = std::max(dmax, omega.term(i).linf());
    if (dmax > c) throw PreconditionViolation("coefficient " + dmax.get_str() + " exceeds C");
    out.k.push_back(Index(1));
    while (out.k.size() <= blocks) {
      Index r = max_support_upto(omega, out.k.back());
      // smallest k > k_m with r_1^{k'} > r for every k' in [k, len]
      Index cand = len + 1;
      for (Index i = len; i > out.k.back(); --i) {
        auto m = omega.term(i).min_support();
        if (m && *m <= r) break;
        cand = i;
      }
      if (cand > len) break;
      out.k.push_back(cand);
    }
  } else {
    if (!omega.coefficient_bound) throw PreconditionViolation("no certified coefficient bound");
    if (*omega.coefficient_bound > c) {
      throw PreconditionViolation("coefficient bound " + omega.coefficient_bound->get_str() + " exceeds C");
    }
    if (!omega.r1_tail) throw PreconditionViolation("r_1^k is not certified to diverge");
  }

  std::shared_ptr<BlockSelection> sel;
  if (!omega.length) {
    sel = std::make_shared<BlockSelection>();
    sel->omega = omega;
    sel->c = c;
    std::lock_guard<std::mutex> lock(sel->mu);
    sel->extend_to(blocks + 1);
    out.k = sel->k;
  }
  for (const Index& k : out.k) {
    auto m = omega.term(k).min_support();
    if (!m) throw PreconditionViolation("zero term in omega");
    out.positions.push_back(*m);
  }
  std::map<Index, std::size_t> block_at;  // position -> block number m (1-based)
  for (std::size_t i = 0; i < out.positions.size(); ++i) {
    out.values.push_back(make_rat(Int(1), c * Int(static_cast<unsigned long>(i + 1))));
    block_at.emplace(out.positions[i], i + 1);
  }

  if (omega.length) {
    std::map<Index, CirclePoint> entries;
    for (std::size_t i = 0; i < out.positions.size(); ++i) entries.emplace(out.positions[i], CirclePoint::rational(out.values[i]));
    out.z = TInfElem::finite(entries);
  } else {
    auto rule = std::make_shared<PatternRule>();
    rule->name = "escape(" + omega.name + ", C=" + c.get_str() + ")";
    rule->entry = [sel, c](const Index& m) -> std::optional<std::pair<Index, CirclePoint>> {
      if (!m.fits_ulong_p() || m > 10'000'000) throw BudgetExceeded("escape witness entry index too large");
      std::lock_guard<std::mutex> lock(sel->mu);
      sel->extend_to(m.get_ui() + 1);
      return std::make_pair(sel->positions[m.get_ui()],
                            CirclePoint::rational(make_rat(Int(1), c * (m + 1))));
    };
    rule->tail_norm_bound = [sel, c](const Index& after) -> std::optional<Rat> {
      std::lock_guard<std::mutex> lock(sel->mu);
      std::size_t m = 0;
      while (true) {
        sel->extend_to(m + 1);
        if (sel->positions[m] > after) break;
        ++m;
      }
      // values 1/((m+1) C) decrease; the norm of 1/C is 0 when C = 1
      Rat v = make_rat(Int(1), c * Int(static_cast<unsigned long>(m + 1)));
      return v > Rat(1, 2) ? Rat(1, 2) : v;
    };
    out.z = TInfElem::pattern(rule, In{Int(0), "coordinates 1/(mC) -> 0"},
                              NotIn{Rat(4) / Rat(c), "sum chord(1/(mC)) >= (4/C) sum 1/m diverges", Int(0), Int(0), {}});
  }

  // Trace t in [k_m, k_{m+1}) for m >= 2.
  out.trace_ok = true;
  for (std::size_t m = 2; m + 1 <= out.k.size() && m <= blocks; ++m) {
    const Rat two_over_m(2, static_cast<unsigned long>(m));
    for (Index t = out.k[m - 1]; t < out.k[m]; ++t) {
      ZInfElem w = omega.term(t);
      EscapeTraceRow row;
      row.t = t;
      row.m = m;
      CirclePoint acc;
      Rat bound = 0;
      std::set<std::size_t> hit;
      bool unexpected = false;
      for (const auto& r : w.runs()) {
        for (auto it = block_at.lower_bound(r.start); it != block_at.end() && it->first < r.start + r.length; ++it) {
          const std::size_t b = it->second;
          hit.insert(b);
          if (b != m && b != m + 1) unexpected = true;
          acc = acc + pair(r.coeff, CirclePoint::rational(out.values[b - 1]));
          bound += Rat(abs_int(r.coeff)) * out.values[b - 1];
        }
      }
      row.kind = hit.empty() ? 'a' : (hit.size() == 1 && *hit.begin() == m ? 'b' : 'c');
      row.pairing = acc;
      row.norm = circle_norm(acc).exact();
      row.bound = bound;
      row.ok = !unexpected && row.norm <= bound && bound <= two_over_m;
      if (!row.ok) out.trace_ok = false;
      out.trace.push_back(std::move(row));
    }
  }
  out.divergence = metric_d1(out.z, TInfElem(), 10'000'000, divergence_bound);
  return out;
}

// g-closure blocks -----------------------------------------------------------------------------------

namespace {

enum class Cmp { Above, NotAbove };

// Decides sum_{n=a}^{b} eps_n > threshold with certified enclosures.
Cmp compare_sum(const TInfElem& z, const Index& a, const Index& b, const Rat& threshold, Interval* enclosure) {
  for (unsigned bits = 64; bits <= 1024; bits *= 2) {
    Interval s = z.argument_sum(a, b, bits);
    if (enclosure) *enclosure = s;
    if (s.lo > threshold) return Cmp::Above;
    if (s.hi <= threshold) return Cmp::NotAbove;
    if (s.lo == s.hi) return s.lo > threshold ? Cmp::Above : Cmp::NotAbove;
  }
  throw Error("block sum too close to " + to_string(threshold) + " to decide");
}

}  // namespace

GClosureResult exa1_gclosure_blocks(const TInfElem& z, std::size_t blocks, std::optional<Index> k0) {
  GClosureResult out;
  if (is_in(z.l1_summable())) {
    throw PreconditionViolation("z lies in T_1^H: the argument series converges and admits no partition");
  }
  if (is_not_in(z.tends_to_1())) {
    out.projection_family = true;
    for (const auto& [k, v] : z.first_entries(blocks)) {
      out.characters.push_back(ZInfElem::unit(k));
      out.chords.push_back(chord_distance(v));
    }
    return out;
  }
  if (!is_in(z.tends_to_1())) throw PreconditionViolation("z is not certified to tend to 1");
  if (!is_not_in(z.l1_summable())) throw PreconditionViolation("divergence of the argument series is not certified");

  const Rat small(1, 100);
  std::optional<Index> rule_k0;
  if (z.rule() && z.rule()->tail_index) rule_k0 = z.rule()->tail_index(small);
  Index start;
  if (k0) {
    if (rule_k0 && *rule_k0 > *k0) {
      throw PreconditionViolation("eps_n < 0.01 is not certified beyond k0 = " + k0->get_str());
    }
    if (!rule_k0 && !z.rule()) throw PreconditionViolation("no tail certificate for the 0.01 bound");
    start = *k0;
  } else {
    if (!rule_k0) throw PreconditionViolation("no tail certificate for the 0.01 bound");
    start = *rule_k0;
  }

  const Rat third(1, 3), half(1, 2);
  out.partition.cutoffs.push_back(start);
  for (std::size_t m = 0; m < blocks; ++m) {
    const Index a = out.partition.cutoffs.back() + 1;
    // Smallest b >= a with S(a, b) > 1/3: exponential search, then bisection.
    Index lo = a - 1;  // S(a, lo) <= 1/3
    Index step = 1;
    Index hi = a;
    while (compare_sum(z, a, hi, third, nullptr) == Cmp::NotAbove) {
      lo = hi;
      step *= 2;
      hi = a + step - 1;
      if (step > pow2(4096)) throw PreconditionViolation("argument series does not reach 1/3");
    }
    Index b = lower_bound_index(lo + 1, hi, [&](const Index& x) {
      return compare_sum(z, a, x, third, nullptr) == Cmp::Above;
    });
    Interval sum;
    compare_sum(z, a, b, third, &sum);
    if (compare_sum(z, a, b, half, &sum) == Cmp::Above || sum.hi >= half) {
      // Refine until the upper bound is certified below 1/2.
      bool below = false;
      for (unsigned bits = 64; bits <= 1024 && !below; bits *= 2) {
        sum = z.argument_sum(a, b, bits);
        below = sum.hi < half;
      }
      if (!below) throw PreconditionViolation("block sum reaches 1/2: some eps_j >= 1/6 after k0");
    }
    if (!(sum.lo > third)) sum = z.argument_sum(a, b, 256);
    out.partition.cutoffs.push_back(b);
    out.partition.sums.push_back(sum);
    out.partition.exact.push_back(sum.lo == sum.hi);
    ZInfElem omega = ZInfElem::indicator(a, b);
    out.characters.push_back(omega);
    out.chords.push_back(chord_of_norm_interval(sum, 40));
  }
  return out;
}

std::vector<BlockTestRow> gclosure_test_element(const GClosureResult& result, const TInfElem& w) {
  std::vector<BlockTestRow> rows;
  for (std::size_t m = 0; m < result.characters.size(); ++m) {
    const ZInfElem& omega = result.characters[m];
    CirclePoint p = pair_zinf(omega, w);
    Interval l1{Rat(0), Rat(0)};
    if (!omega.is_zero()) {
      for (const auto& [k, v] : w.entries_in(*omega.min_support(), *omega.max_support())) {
        if (omega.coeff(k) == 0) continue;
        l1 = add(l1, scale(abs_int(omega.coeff(k)), chord_distance(v).enclosure));
      }
    }
    rows.push_back(BlockTestRow{chord_distance(p), l1});
  }
  return rows;
}

}  // namespace charsub
