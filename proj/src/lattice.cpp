#include "charsub/lattice.hpp"

#include <utility>

namespace charsub {

Int dot(const IntVector& a, const IntVector& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Int linf_norm(const IntVector& v) {
  Int m = 0;
  for (const Int& x : v) m = std::max(m, Int(abs(x)));
  return m;
}

std::vector<IntVector> integer_kernel(const IntMatrix& m, std::size_t cols) {
  std::vector<IntVector> out;
  if (m.empty()) {
    for (std::size_t j = 0; j < cols; ++j) {
      IntVector e(cols, Int(0));
      e[j] = 1;
      out.push_back(std::move(e));
    }
    return out;
  }
  SmithForm sf = smith_normal_form(m);
  const std::size_t rows = m.size();
  for (std::size_t j = 0; j < cols; ++j) {
    if (j < rows && sf.s[j][j] != 0) continue;
    IntVector col(cols);
    for (std::size_t i = 0; i < cols; ++i) col[i] = sf.v[i][j];
    out.push_back(std::move(col));
  }
  return out;
}

std::vector<IntVector> lll_reduce(std::vector<IntVector> b, const Rat& delta) {
  const std::size_t k = b.size();
  if (k <= 1) return b;
  std::vector<std::vector<Rat>> mu(k, std::vector<Rat>(k));
  std::vector<Rat> bstar_sq(k);
  std::vector<std::vector<Rat>> bstar(k);

  auto gram_schmidt = [&] {
    for (std::size_t i = 0; i < k; ++i) {
      bstar[i].assign(b[i].begin(), b[i].end());
      for (std::size_t j = 0; j < i; ++j) {
        Rat num = 0;
        for (std::size_t t = 0; t < b[i].size(); ++t) num += Rat(b[i][t]) * bstar[j][t];
        mu[i][j] = bstar_sq[j] == 0 ? Rat(0) : Rat(num / bstar_sq[j]);
        for (std::size_t t = 0; t < b[i].size(); ++t) bstar[i][t] -= mu[i][j] * bstar[j][t];
      }
      bstar_sq[i] = 0;
      for (const Rat& x : bstar[i]) bstar_sq[i] += x * x;
    }
  };
  gram_schmidt();
  std::size_t i = 1;
  while (i < k) {
    for (std::size_t j = i; j-- > 0;) {
      Rat m = mu[i][j];
      Int r = floor_rat(m + Rat(1, 2));
      if (r != 0) {
        for (std::size_t t = 0; t < b[i].size(); ++t) b[i][t] -= r * b[j][t];
        gram_schmidt();
      }
    }
    if (bstar_sq[i] >= (delta - mu[i][i - 1] * mu[i][i - 1]) * bstar_sq[i - 1]) {
      ++i;
    } else {
      std::swap(b[i], b[i - 1]);
      gram_schmidt();
      i = i > 1 ? i - 1 : 1;
    }
  }
  return b;
}

}  // namespace charsub
