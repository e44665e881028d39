#include "charsub/diophantine.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace charsub {

namespace {

using i128 = __int128;

std::int64_t to_i64(const Int& a) {
  if (!a.fits_slong_p()) throw InvalidArgument("coefficient " + a.get_str() + " does not fit in 64 bits");
  return a.get_si();
}

// x = r + sum_d s_d sqrt(d) mod 1.
struct ExactForm {
  Rat r;
  std::map<Int, Rat> s;
};

std::optional<std::vector<ExactForm>> exact_forms(const std::vector<CirclePoint>& xs) {
  std::vector<ExactForm> out;
  for (const CirclePoint& x : xs) {
    if (x.is_rational()) {
      out.push_back(ExactForm{x.value(), {}});
    } else if (const QuadraticSurd* q = x.surd_form()) {
      ExactForm f{make_rat(q->a, q->c), {}};
      f.s[q->d] = make_rat(q->b, q->c);
      out.push_back(std::move(f));
    } else {
      return std::nullopt;
    }
  }
  return out;
}

// Integer constraints: rows[j] . n = 0 for every surd row, and w . n = 0 mod l.
struct Constraints {
  std::vector<std::vector<Int>> rows;
  std::vector<Int> w;
  Int l;
};

Constraints constraints_for(const std::vector<ExactForm>& forms) {
  const std::size_t m = forms.size();
  Constraints c;
  std::map<Int, std::vector<Rat>> by_d;
  for (std::size_t i = 0; i < m; ++i)
    for (const auto& [d, s] : forms[i].s) {
      auto& row = by_d[d];
      row.resize(m, Rat(0));
      row[i] = s;
    }
  for (auto& [d, row] : by_d) {
    row.resize(m, Rat(0));
    Int den = 1;
    for (const Rat& q : row) den = lcm(den, q.get_den());
    std::vector<Int> ints;
    for (const Rat& q : row) ints.push_back(q.get_num() * (den / q.get_den()));
    c.rows.push_back(std::move(ints));
  }
  c.l = 1;
  for (const auto& f : forms) c.l = lcm(c.l, f.r.get_den());
  for (const auto& f : forms) c.w.push_back(f.r.get_num() * (c.l / f.r.get_den()));
  return c;
}

bool satisfies(const Constraints& c, const IntVector& n) {
  for (const auto& row : c.rows)
    if (dot(row, n) != 0) return false;
  return mod_floor(dot(c.w, n), c.l) == 0;
}

void normalize_sign(IntVector& v) {
  for (const Int& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (Int& y : v) y = -y;
    return;
  }
}

bool torsion_only(const std::vector<CirclePoint>& xs, const IntVector& n) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(pair(n[i], xs[i]) == CirclePoint())) return false;
  }
  return true;
}

// Odometer over [-h, h]^m in canonical sign; visit returns false to stop.
template <class Visit>
void for_each_candidate(std::size_t m, std::int64_t h, std::uint64_t cap, Visit visit) {
  long double total = 1;
  for (std::size_t i = 0; i < m; ++i) total *= static_cast<long double>(2 * h + 1);
  if (total > static_cast<long double>(cap)) throw BudgetExceeded("relation scan exceeds the candidate cap");
  std::vector<std::int64_t> n(m, -h);
  while (true) {
    std::size_t first = 0;
    while (first < m && n[first] == 0) ++first;
    if (first < m && n[first] > 0) {
      if (!visit(n)) return;
    }
    std::size_t i = 0;
    while (i < m && n[i] == h) n[i++] = -h;
    if (i == m) return;
    ++n[i];
  }
}

IntVector to_int_vector(const std::vector<std::int64_t>& n) {
  IntVector v;
  for (std::int64_t x : n) v.emplace_back(static_cast<long>(x));
  return v;
}

Interval residual_of(const std::vector<CirclePoint>& xs, const IntVector& n, unsigned bits) {
  CirclePoint s;
  for (std::size_t i = 0; i < xs.size(); ++i) s = s + pair(n[i], xs[i]);
  NormValue nv = circle_norm(s, bits);
  return {nv.lower(), nv.upper()};
}

}  // namespace

const char* relation_kind_name(RelationResult::Kind k) {
  switch (k) {
    case RelationResult::Kind::Found:
      return "found";
    case RelationResult::Kind::NoneFound:
      return "none_found";
    default:
      return "ambiguous";
  }
}

std::optional<IntVector> relation_scan(const std::vector<CirclePoint>& xs, std::int64_t height, std::uint64_t cap) {
  auto forms = exact_forms(xs);
  if (!forms) throw InvalidArgument("exact scan needs rational or quadratic surd points");
  Constraints c = constraints_for(*forms);
  // int64 copies for speed
  std::vector<std::vector<std::int64_t>> rows;
  for (const auto& row : c.rows) {
    std::vector<std::int64_t> r;
    for (const Int& x : row) r.push_back(to_i64(x));
    rows.push_back(std::move(r));
  }
  std::vector<std::int64_t> w;
  for (const Int& x : c.w) w.push_back(to_i64(mod_floor(x, c.l)));
  const std::int64_t l = to_i64(c.l);
  std::optional<IntVector> best;
  Int best_norm;
  for_each_candidate(xs.size(), height, cap, [&](const std::vector<std::int64_t>& n) {
    for (const auto& row : rows) {
      i128 s = 0;
      for (std::size_t i = 0; i < n.size(); ++i) s += static_cast<i128>(row[i]) * n[i];
      if (s != 0) return true;
    }
    i128 s = 0;
    for (std::size_t i = 0; i < n.size(); ++i) s += static_cast<i128>(w[i]) * n[i];
    if (s % l != 0) return true;
    IntVector v = to_int_vector(n);
    Int norm = linf_norm(v);
    if (!best || norm < best_norm) {
      best = v;
      best_norm = norm;
    }
    return true;
  });
  return best;
}

RelationResult integer_relation(const std::vector<CirclePoint>& xs, const Int& height, unsigned bits) {
  if (xs.empty()) throw InvalidArgument("integer_relation needs at least one point");
  if (height < 1) throw InvalidArgument("height must be positive");
  RelationResult out;
  out.height = height;
  out.precision_bits = bits;
  const std::size_t m = xs.size();

  auto found = [&](IntVector v, bool exact) {
    normalize_sign(v);
    RelationCertificate cert;
    cert.coefficients = v;
    cert.exact_zero = exact;
    cert.residual = exact ? Interval{Rat(0), Rat(0)} : residual_of(xs, v, bits);
    cert.torsion_only = exact && torsion_only(xs, v);
    out.kind = RelationResult::Kind::Found;
    out.relation = std::move(cert);
    return out;
  };

  if (auto forms = exact_forms(xs)) {
    Constraints c = constraints_for(*forms);
    IntMatrix mat;
    for (const auto& row : c.rows) {
      std::vector<Int> r = row;
      r.push_back(0);
      mat.push_back(std::move(r));
    }
    std::vector<Int> last = c.w;
    last.push_back(-c.l);
    mat.push_back(std::move(last));
    std::vector<IntVector> kernel = integer_kernel(mat, m + 1);
    for (auto& v : kernel) v.pop_back();
    if (kernel.empty()) {
      out.kind = RelationResult::Kind::NoneFound;
      out.method = "exact: the relation lattice is {0}, so no relation exists at any height";
      return out;
    }
    std::vector<IntVector> reduced = lll_reduce(kernel);
    std::sort(reduced.begin(), reduced.end(),
              [](const IntVector& a, const IntVector& b) { return linf_norm(a) < linf_norm(b); });
    if (linf_norm(reduced.front()) <= height) {
      out.method = "exact: LLL-reduced basis of the relation lattice";
      if (!satisfies(c, reduced.front())) throw Error("internal: kernel vector fails the constraints");
      return found(reduced.front(), true);
    }
    // Every vector with l_inf <= h has squared length <= m h^2; LLL keeps
    // |b_1|^2 within 2^(k-1) of the shortest vector.
    IntVector b1 = lll_reduce(kernel).front();
    const Int b1sq = dot(b1, b1);
    const Int limit = pow2(kernel.size() - 1) * Int(static_cast<unsigned long>(m)) * height * height;
    if (b1sq > limit) {
      out.kind = RelationResult::Kind::NoneFound;
      out.method = "exact: LLL bound excludes every vector up to the height";
      return out;
    }
    out.method = "exact: exhaustive scan of the box";
    auto v = relation_scan(xs, to_i64(height));
    if (v) return found(*v, true);
    out.kind = RelationResult::Kind::NoneFound;
    return out;
  }

  // Certified numerical scan.
  out.method = "certified scan with " + std::to_string(bits) + "-bit enclosures";
  constexpr unsigned kFix = 96;
  const Int scale = pow2(kFix);
  std::vector<i128> lo, hi;
  for (const CirclePoint& x : xs) {
    Interval iv = x.refine(kFix + 8);
    const Int a = floor_rat(iv.lo * Rat(scale)), b = ceil_rat(iv.hi * Rat(scale));
    auto to128 = [](const Int& z) {
      i128 r = 0;
      std::string s = z.get_str(16);
      for (char ch : s) r = r * 16 + (ch <= '9' ? ch - '0' : ch - 'a' + 10);
      return r;
    };
    lo.push_back(to128(a));
    hi.push_back(to128(b));
  }
  const i128 one = static_cast<i128>(1) << kFix;
  auto floor_div = [&](i128 v) { return v >= 0 ? v / one : -((-v + one - 1) / one); };
  bool ambiguous = false;
  for_each_candidate(m, to_i64(height), 50'000'000, [&](const std::vector<std::int64_t>& n) {
    i128 s_lo = 0, s_hi = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (n[i] >= 0) {
        s_lo += n[i] * lo[i];
        s_hi += n[i] * hi[i];
      } else {
        s_lo += n[i] * hi[i];
        s_hi += n[i] * lo[i];
      }
    }
    const bool contains_integer = floor_div(s_lo) != floor_div(s_hi) || s_lo % one == 0;
    if (contains_integer) {
      IntVector v = to_int_vector(n);
      Interval r = residual_of(xs, v, bits);
      if (r.lo > 0) return true;
      out.ambiguous = v;
      ambiguous = true;
      return false;
    }
    return true;
  });
  out.kind = ambiguous ? RelationResult::Kind::Ambiguous : RelationResult::Kind::NoneFound;
  return out;
}

// Kronecker search ----------------------------------------------------------------------------

bool verify_kronecker(const std::vector<CirclePoint>& xs, const std::vector<CirclePoint>& targets, const Rat& eps,
                      const Int& n, unsigned bits) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(circle_norm(pair(n, xs[i]) - targets[i], bits).upper() < eps)) return false;
  }
  return true;
}

KroneckerResult kronecker_char_search(const std::vector<CirclePoint>& xs, const std::vector<CirclePoint>& targets,
                                      const Rat& eps, std::uint64_t n_max, const Int& gate_height) {
  if (eps <= 0) throw InvalidArgument("epsilon must be positive");
  if (xs.empty() || xs.size() != targets.size()) throw InvalidArgument("points and targets must pair up");
  KroneckerResult out;
  out.gate_height = gate_height;
  RelationResult gate = integer_relation(xs, gate_height);
  if (gate.kind != RelationResult::Kind::NoneFound) {
    out.dependency = std::move(gate);
    return out;
  }
  constexpr unsigned kFix = 62;
  const std::uint64_t one = std::uint64_t{1} << kFix;
  const std::uint64_t mask = one - 1;
  const Int scale = pow2(kFix);
  auto fixed = [&](const CirclePoint& p) {
    Interval iv = p.refine(kFix + 16);
    return mod_floor(floor_rat(iv.lo * Rat(scale)), scale).get_ui();
  };
  const std::size_t m = xs.size();
  std::vector<std::uint64_t> step(m), target(m), acc(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    step[i] = fixed(xs[i]);
    target[i] = fixed(targets[i]);
  }
  const Rat eps_units = eps * Rat(scale);
  const std::uint64_t eps_fixed =
      eps_units >= Rat(scale) ? one : static_cast<std::uint64_t>(ceil_rat(eps_units).get_ui());
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    ++out.scanned;
    // |true - approximate| <= 2n + 2 units; anything closer than eps + slack is checked exactly.
    const std::uint64_t slack = 2 * n + 4;
    bool candidate = true;
    for (std::size_t i = 0; i < m; ++i) {
      acc[i] = (acc[i] + step[i]) & mask;
      const std::uint64_t diff = (acc[i] - target[i]) & mask;
      const std::uint64_t dist = std::min(diff, one - diff);
      if (dist >= eps_fixed + slack) candidate = false;
    }
    if (!candidate) continue;
    const Int nn(static_cast<unsigned long>(n));
    if (!verify_kronecker(xs, targets, eps, nn, 64) && !verify_kronecker(xs, targets, eps, nn, 128)) continue;
    KroneckerSolution sol;
    sol.n = nn;
    for (std::size_t i = 0; i < m; ++i) {
      NormValue nv = circle_norm(pair(nn, xs[i]) - targets[i], 64);
      sol.achieved_upper.push_back(nv.upper());
      sol.achieved.push_back(std::move(nv));
    }
    out.reverified = verify_kronecker(xs, targets, eps, nn, 128);
    out.solution = std::move(sol);
    return out;
  }
  return out;
}

// l1 words --------------------------------------------------------------------------------------------

std::uint64_t delannoy_count(std::uint64_t r, std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> d(r + 1, std::vector<std::uint64_t>(n + 1, 1));
  for (std::uint64_t i = 1; i <= r; ++i)
    for (std::uint64_t j = 1; j <= n; ++j) d[i][j] = d[i - 1][j] + d[i][j - 1] + d[i - 1][j - 1];
  return d[r][n];
}

namespace {

template <class Visit>
void for_each_l1_ball(std::uint64_t r, std::int64_t n, Visit visit) {
  std::vector<std::int64_t> v(r, 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i == r) {
      visit(v);
      return;
    }
    for (std::int64_t x = -left; x <= left; ++x) {
      v[i] = x;
      rec(i + 1, left - (x < 0 ? -x : x));
    }
    v[i] = 0;
  };
  rec(0, n);
}

}  // namespace

std::uint64_t l1_ball_count(std::uint64_t r, std::uint64_t n) {
  std::uint64_t c = 0;
  for_each_l1_ball(r, static_cast<std::int64_t>(n), [&](const std::vector<std::int64_t>&) { ++c; });
  return c;
}

WordCheckReport l1_word_check(std::uint64_t rank, std::uint64_t n0) {
  if (rank < 1 || n0 < 1) throw InvalidArgument("rank and n0 must be at least 1");
  WordCheckReport out;
  out.rank = rank;
  out.n0 = n0;
  const std::int64_t b = static_cast<std::int64_t>(n0);
  for_each_l1_ball(rank, b, [&](const std::vector<std::int64_t>& g) {
    ++out.vectors_checked;
    std::int64_t norm = 0;
    for (std::int64_t x : g) norm += x < 0 ? -x : x;
    if (norm != 0 && 2 * b * norm <= b) ++out.violations;
  });
  out.counts_match = true;
  for (std::uint64_t n = 0; n <= n0; ++n) {
    out.ball_counts.push_back(l1_ball_count(rank, n));
    out.delannoy.push_back(delannoy_count(rank, n));
    if (out.ball_counts.back() != out.delannoy.back()) out.counts_match = false;
  }
  // 2 n0 |g| <= n0 with |g| a nonnegative integer gives |g| <= 1/2, so |g| = 0.
  out.symbolic = 2 * n0 > n0;
  out.passed = out.violations == 0 && out.counts_match && out.symbolic;
  return out;
}

}  // namespace charsub
