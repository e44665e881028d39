#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the library beyond its value types.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 mod(i64 a, i64 m) { return ((a % m) + m) % m; }

/// ||p/q|| as (num, den), reduced.
inline std::pair<i64, i64> norm_rational(i64 p, i64 q) {
  i64 r = mod(p, q);
  i64 n = std::min(r, q - r);
  i64 g = std::gcd(n, q);
  if (n == 0) return {0, 1};
  return {n / g, q / g};
}

/// Residues u_0, u_1, ... mod q until a state repeats; returns (preperiod, cycle).
/// `next` maps the state vector to the next one; the residue is state[0].
template <class Step>
std::pair<std::size_t, std::vector<i64>> residue_cycle(std::vector<i64> state, Step next) {
  std::map<std::vector<i64>, std::size_t> seen;
  std::vector<i64> out;
  while (!seen.count(state)) {
    seen[state] = out.size();
    out.push_back(state[0]);
    state = next(state);
  }
  const std::size_t start = seen[state];
  return {start, std::vector<i64>(out.begin() + static_cast<long>(start), out.end())};
}

inline std::pair<std::size_t, std::vector<i64>> geometric_cycle(i64 a, i64 ratio, i64 q) {
  return residue_cycle({mod(a, q)}, [&](const std::vector<i64>& s) { return std::vector<i64>{mod(s[0] * ratio, q)}; });
}

inline std::pair<std::size_t, std::vector<i64>> factorial_cycle(i64 a, i64 q) {
  // state = (u_n mod q, n mod q); u_{n+1} = u_n * (n+1)
  return residue_cycle({mod(a, q), 0}, [&](const std::vector<i64>& s) {
    return std::vector<i64>{mod(s[0] * mod(s[1] + 1, q), q), mod(s[1] + 1, q)};
  });
}

/// Fibonacci by direct iteration.
inline mpz_class fibonacci(unsigned n) {
  mpz_class a = 0, b = 1;
  for (unsigned i = 0; i < n; ++i) {
    mpz_class c = a + b;
    a = b;
    b = c;
  }
  return a;
}

/// Determinantal divisors: d_k = gcd of all k x k minors of an integer matrix.
inline mpz_class det(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  mpq_class d = 1;
  std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      mpq_class f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d.get_num();
}

inline std::vector<mpz_class> smith_diagonal(const std::vector<std::vector<mpz_class>>& m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<mpz_class> divisors{1};
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    mpz_class g = 0;
    std::vector<bool> rsel(rows, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(k), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(k), true);
      do {
        std::vector<std::vector<mpz_class>> sub;
        for (std::size_t r = 0; r < rows; ++r) {
          if (!rsel[r]) continue;
          std::vector<mpz_class> row;
          for (std::size_t c = 0; c < cols; ++c)
            if (csel[c]) row.push_back(m[r][c]);
          sub.push_back(row);
        }
        mpz_class d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
    divisors.push_back(g);
  }
  std::vector<mpz_class> diag;
  for (std::size_t k = 1; k < divisors.size(); ++k) {
    if (divisors[k] == 0) {
      diag.push_back(0);
    } else {
      diag.push_back(divisors[k] / divisors[k - 1]);
    }
  }
  return diag;
}

/// Elements of Z_{d_1} x ... x Z_{d_r}.
inline std::vector<std::vector<i64>> elements(const std::vector<i64>& d) {
  std::vector<std::vector<i64>> out{{}};
  for (i64 f : d) {
    std::vector<std::vector<i64>> next;
    for (const auto& e : out)
      for (i64 a = 0; a < f; ++a) {
        auto x = e;
        x.push_back(a);
        next.push_back(x);
      }
    out = next;
  }
  return out;
}

/// sum chi_i x_i / d_i mod 1, as a numerator over lcm(d).
inline i64 pairing(const std::vector<i64>& d, const std::vector<i64>& chi, const std::vector<i64>& x) {
  i64 l = 1;
  for (i64 f : d) l = std::lcm(l, f);
  i64 s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) s += chi[i] * x[i] * (l / d[i]);
  return mod(s, l);
}

/// Subgroup generated by gens, by closure under addition.
inline std::set<std::vector<i64>> span(const std::vector<i64>& d, const std::vector<std::vector<i64>>& gens) {
  std::set<std::vector<i64>> h{std::vector<i64>(d.size(), 0)};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::vector<i64>> cur(h.begin(), h.end());
    for (const auto& a : cur)
      for (const auto& g : gens) {
        std::vector<i64> s(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) s[i] = mod(a[i] + g[i], d[i]);
        if (h.insert(s).second) grew = true;
      }
  }
  return h;
}

inline std::set<std::vector<i64>> annihilator(const std::vector<i64>& d, const std::set<std::vector<i64>>& h) {
  std::set<std::vector<i64>> out;
  for (const auto& chi : elements(d)) {
    bool ok = true;
    for (const auto& x : h) ok = ok && pairing(d, chi, x) == 0;
    if (ok) out.insert(chi);
  }
  return out;
}

/// Multiset of element orders; determines a finite abelian group up to isomorphism.
inline std::map<i64, i64> order_profile(const std::vector<i64>& d) {
  std::map<i64, i64> out;
  for (const auto& x : elements(d)) {
    i64 o = 1;
    for (std::size_t i = 0; i < d.size(); ++i) o = std::lcm(o, d[i] / std::gcd(d[i], x[i]));
    ++out[o];
  }
  return out;
}

/// Order profile of G/H from the explicit coset structure.
inline std::map<i64, i64> quotient_order_profile(const std::vector<i64>& d, const std::set<std::vector<i64>>& h) {
  std::map<i64, i64> out;
  std::set<std::vector<i64>> done;
  for (const auto& x : elements(d)) {
    std::set<std::vector<i64>> coset;
    for (const auto& y : h) {
      std::vector<i64> s(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) s[i] = mod(x[i] + y[i], d[i]);
      coset.insert(s);
    }
    if (done.count(*coset.begin())) continue;
    done.insert(*coset.begin());
    i64 o = 1;
    std::vector<i64> acc = x;
    while (!h.count(acc)) {
      for (std::size_t i = 0; i < d.size(); ++i) acc[i] = mod(acc[i] + x[i], d[i]);
      ++o;
    }
    ++out[o];
  }
  return out;
}

/// Every value sum n_i u_{r_i} with m <= r_1 < ... <= N, sum |n_i| <= k, at least one n_i != 0.
inline std::set<mpz_class> akm(const std::vector<mpz_class>& u, int k, std::size_t m, std::size_t n) {
  std::set<mpz_class> out;
  std::map<std::pair<mpz_class, bool>, int> states{{{0, false}, 0}};
  for (std::size_t i = m; i <= n; ++i) {
    auto next = states;
    for (const auto& [key, used] : states)
      for (int c = -k; c <= k; ++c) {
        if (c == 0) continue;
        const int cost = used + std::abs(c);
        if (cost > k) continue;
        auto nk = std::make_pair(mpz_class(key.first + c * u[i]), true);
        auto it = next.find(nk);
        if (it == next.end() || it->second > cost) next[nk] = cost;
      }
    states = next;
  }
  for (const auto& [key, used] : states)
    if (key.second) out.insert(key.first);
  return out;
}

/// #{v in Z^r : ||v||_1 <= n} = sum_k 2^k C(r,k) C(n,k).
inline std::uint64_t cross_polytope_count(std::uint64_t r, std::uint64_t n) {
  auto binom = [](std::uint64_t a, std::uint64_t b) {
    if (b > a) return std::uint64_t{0};
    std::uint64_t x = 1;
    for (std::uint64_t i = 1; i <= b; ++i) x = x * (a - b + i) / i;
    return x;
  };
  std::uint64_t s = 0;
  for (std::uint64_t k = 0; k <= std::min(r, n); ++k) s += (std::uint64_t{1} << k) * binom(r, k) * binom(n, k);
  return s;
}

/// ||n * sqrt(d) - t|| in long double.
inline long double dist_surd(long n, long d, long double t) {
  long double v = static_cast<long double>(n) * std::sqrt(static_cast<long double>(d)) - t;
  v -= std::floor(v);
  return std::min(v, 1 - v);
}

}  // namespace oracle
