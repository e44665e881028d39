#include "charsub/finite_abelian.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace charsub {

namespace {

using i128 = __int128;

std::int64_t mod128(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

// s*a + t*b = g >= 0.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = tmp;
    tmp = old_t - q * cur_t;
    old_t = cur_t;
    cur_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}


}  // namespace

// FinAbGroup ---------------------------------------------------------------

FinAbGroup::FinAbGroup(std::vector<std::int64_t> invariant_factors) {
  for (std::int64_t d : invariant_factors) {
    if (d < 1) throw InvalidArgument("invariant factors must be positive");
    if (d == 1) continue;
    if (!factors_.empty() && d % factors_.back() != 0) {
      throw InvalidArgument("invariant factors must form a divisibility chain");
    }
    factors_.push_back(d);
  }
}

std::uint64_t FinAbGroup::order() const {
  std::uint64_t n = 1;
  for (std::int64_t d : factors_) n *= static_cast<std::uint64_t>(d);
  return n;
}

Coords FinAbGroup::reduce(Coords x) const {
  if (x.size() != rank()) throw InvalidArgument("element shape does not match " + str());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = mod_floor(x[i], factors_[i]);
  return x;
}

Coords FinAbGroup::add(const Coords& x, const Coords& y) const {
  Coords z(rank());
  for (std::size_t i = 0; i < rank(); ++i) z[i] = mod_floor(x[i] + y[i], factors_[i]);
  return z;
}

Coords FinAbGroup::neg(const Coords& x) const {
  Coords z(rank());
  for (std::size_t i = 0; i < rank(); ++i) z[i] = mod_floor(-x[i], factors_[i]);
  return z;
}

Coords FinAbGroup::scale(std::int64_t k, const Coords& x) const {
  Coords z(rank());
  for (std::size_t i = 0; i < rank(); ++i) z[i] = mod128(static_cast<i128>(k) * x[i], factors_[i]);
  return z;
}

bool FinAbGroup::valid(const Coords& x) const {
  if (x.size() != rank()) return false;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (x[i] < 0 || x[i] >= factors_[i]) return false;
  }
  return true;
}

std::string FinAbGroup::str() const {
  if (factors_.empty()) return "Z1";
  std::string s;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) s += " x ";
    s += "Z" + std::to_string(factors_[i]);
  }
  return s;
}

FinAbGroup parse_group(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t == "trivial" || t == "0") return FinAbGroup();
  std::vector<std::int64_t> factors;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = t.find('x', pos);
    const std::string tok = t.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (tok.size() < 2 || tok[0] != 'Z') throw InvalidArgument("bad group factor '" + tok + "'");
    try {
      std::size_t used = 0;
      long long d = std::stoll(tok.substr(1), &used);
      if (used != tok.size() - 1 || d < 1) throw std::invalid_argument(tok);
      factors.push_back(d);
    } catch (const std::logic_error&) {
      throw InvalidArgument("bad group factor '" + tok + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return FinAbGroup(std::move(factors));
}

std::int64_t pair_numerator(const FinAbGroup& g, const Coords& chi, const Coords& x) {
  if (chi.size() != g.rank() || x.size() != g.rank()) {
    throw InvalidArgument("pairing shape mismatch for " + g.str());
  }
  const std::int64_t n = g.exponent();
  i128 acc = 0;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    acc += static_cast<i128>(chi[i]) * x[i] % n * (n / g.factors()[i]);
    acc %= n;
  }
  return mod128(acc, n);
}

CirclePoint dual_pair_finite(const FinAbGroup& g, const Character& chi, const GroupElement& x) {
  return canonicalize(Int(static_cast<long>(pair_numerator(g, chi.coords, x.coords))),
                      Int(static_cast<long>(g.exponent())));
}

std::string coords_str(const Coords& x) {
  if (x.size() == 1) return std::to_string(x[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

// Homomorphism ---------------------------------------------------------------

Homomorphism::Homomorphism(FinAbGroup source, FinAbGroup target, std::vector<Coords> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_.rank()) throw InvalidArgument("one image per generator required");
  for (std::size_t i = 0; i < images_.size(); ++i) {
    images_[i] = target_.reduce(images_[i]);
    Coords z = target_.scale(source_.factors()[i], images_[i]);
    if (z != target_.zero()) throw InvalidArgument("images do not respect generator orders");
  }
}

Homomorphism Homomorphism::identity(const FinAbGroup& g) {
  std::vector<Coords> images(g.rank(), g.zero());
  for (std::size_t i = 0; i < g.rank(); ++i) images[i][i] = 1;
  return Homomorphism(g, g, std::move(images));
}

Coords Homomorphism::apply(const Coords& x) const {
  if (x.size() != source_.rank()) throw InvalidArgument("homomorphism argument shape mismatch");
  const std::size_t r = target_.rank();
  std::vector<i128> acc(r, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < r; ++j) {
      acc[j] = (acc[j] + static_cast<i128>(x[i]) * images_[i][j]) % target_.factors()[j];
    }
  }
  Coords out(r);
  for (std::size_t j = 0; j < r; ++j) out[j] = mod128(acc[j], target_.factors()[j]);
  return out;
}

// Subgroup -------------------------------------------------------------------

Subgroup::Subgroup(FinAbGroup ambient, const std::vector<Coords>& generators)
    : ambient_(std::move(ambient)) {
  const std::size_t r = ambient_.rank();
  basis_.assign(r, Coords(r, 0));
  for (std::size_t i = 0; i < r; ++i) basis_[i][i] = ambient_.factors()[i];
  Coords buf;
  for (const Coords& g : generators) {
    if (g.size() != r) throw InvalidArgument("element shape does not match " + ambient_.str());
    buf.resize(r);
    for (std::size_t i = 0; i < r; ++i) buf[i] = mod_floor(g[i], ambient_.factors()[i]);
    insert(buf);
  }
  // Reduce entries above each pivot into [0, pivot).
  const auto& d = ambient_.factors();
  for (std::size_t j = 0; j < r; ++j) {
    const std::int64_t p = basis_[j][j];
    for (std::size_t i = 0; i < j; ++i) {
      std::int64_t q = basis_[i][j] / p;
      if (basis_[i][j] - q * p < 0) --q;
      if (q == 0) continue;
      for (std::size_t k = j; k < r; ++k) {
        basis_[i][k] = k == j ? basis_[i][k] - q * p
                              : mod128(basis_[i][k] - static_cast<i128>(q) * basis_[j][k], d[k]);
      }
    }
  }
}

void Subgroup::insert(Coords& v) {
  const std::size_t r = ambient_.rank();
  const auto& d = ambient_.factors();
  for (std::size_t j = 0; j < r; ++j) {
    if (v[j] == 0) continue;
    Coords& row = basis_[j];
    const std::int64_t p = row[j];
    std::int64_t s, t;
    const std::int64_t g = ext_gcd(p, v[j], s, t);
    const std::int64_t a = p / g, b = v[j] / g;
    row[j] = g;
    v[j] = 0;
    for (std::size_t k = j + 1; k < r; ++k) {
      const std::int64_t rk = row[k], vk = v[k];
      row[k] = mod128(static_cast<i128>(s) * rk + static_cast<i128>(t) * vk, d[k]);
      v[k] = mod128(static_cast<i128>(a) * vk - static_cast<i128>(b) * rk, d[k]);
    }
  }
}

Subgroup Subgroup::whole(const FinAbGroup& g) {
  std::vector<Coords> gens(g.rank(), g.zero());
  for (std::size_t i = 0; i < g.rank(); ++i) gens[i][i] = 1;
  return Subgroup(g, gens);
}

std::vector<Coords> Subgroup::generators() const {
  std::vector<Coords> out;
  for (const Coords& row : basis_) {
    Coords x = ambient_.reduce(row);
    if (x != ambient_.zero()) out.push_back(std::move(x));
  }
  return out;
}

std::uint64_t Subgroup::order() const {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    n *= static_cast<std::uint64_t>(ambient_.factors()[i] / basis_[i][i]);
  }
  return n;
}

bool Subgroup::contains(const Coords& x) const {
  if (x.size() != ambient_.rank()) return false;
  const auto& d = ambient_.factors();
  Coords v = x;
  for (std::size_t j = 0; j < v.size(); ++j) {
    std::int64_t vj = mod_floor(v[j], d[j]);
    const std::int64_t p = basis_[j][j];
    if (vj % p != 0) return false;
    const std::int64_t q = vj / p;
    if (q == 0) continue;
    for (std::size_t k = j + 1; k < v.size(); ++k) {
      v[k] = mod128(v[k] - static_cast<i128>(q) * basis_[j][k], d[k]);
    }
  }
  return true;
}

bool Subgroup::is_subgroup_of(const Subgroup& other) const {
  if (!(ambient_ == other.ambient_)) return false;
  for (const Coords& g : generators()) {
    if (!other.contains(g)) return false;
  }
  return true;
}

std::size_t Subgroup::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (const Coords& row : basis_) {
    for (std::int64_t e : row) h = (h ^ static_cast<std::size_t>(e)) * 1099511628211ull;
  }
  return h;
}

void Subgroup::for_each_element(const std::function<void(const Coords&)>& visit) const {
  const std::size_t r = ambient_.rank();
  const auto& d = ambient_.factors();
  Coords acc(r, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == r) {
      visit(acc);
      return;
    }
    const std::int64_t steps = d[i] / basis_[i][i];
    Coords saved = acc;
    for (std::int64_t c = 0; c < steps; ++c) {
      rec(i + 1);
      for (std::size_t k = i; k < r; ++k) acc[k] = mod_floor(acc[k] + basis_[i][k], d[k]);
    }
    acc = saved;
  };
  rec(0);
}

std::vector<Coords> Subgroup::elements(std::uint64_t cap) const {
  if (order() > cap) throw BudgetExceeded("subgroup larger than enumeration cap");
  std::vector<Coords> out;
  out.reserve(order());
  for_each_element([&](const Coords& x) { out.push_back(x); });
  return out;
}

Subgroup Subgroup::join(const Subgroup& other) const {
  if (!(ambient_ == other.ambient_)) throw InvalidArgument("join of subgroups of different groups");
  std::vector<Coords> gens = generators();
  for (const Coords& g : other.generators()) gens.push_back(g);
  return Subgroup(ambient_, gens);
}

Subgroup Subgroup::meet(const Subgroup& other) const {
  return annihilator(annihilator(*this).join(annihilator(other)));
}

namespace {

// C with C * B = D, where B is the Hermite basis and D = diag(d).
IntMatrix cofactor_lattice(const FinAbGroup& g, const std::vector<Coords>& basis) {
  const std::size_t r = g.rank();
  IntMatrix c(r, std::vector<Int>(r, 0));
  for (std::size_t j = 0; j < r; ++j) {
    c[j][j] = Int(static_cast<long>(g.factors()[j] / basis[j][j]));
    for (std::size_t k = j + 1; k < r; ++k) {
      Int acc = 0;
      for (std::size_t i = j; i < k; ++i) acc += c[j][i] * Int(static_cast<long>(basis[i][k]));
      Int p(static_cast<long>(basis[k][k]));
      if (mod_floor(acc, p) != 0) throw Error("internal: non-integral cofactor lattice");
      c[j][k] = -acc / p;
    }
  }
  return c;
}

std::int64_t to_i64_mod(const Int& v, std::int64_t m) {
  return static_cast<std::int64_t>(mod_floor(v, Int(static_cast<long>(m))).get_si());
}

}  // namespace

Subgroup::Abstract Subgroup::as_abstract() const {
  const std::size_t r = ambient_.rank();
  IntMatrix c = cofactor_lattice(ambient_, basis_);
  SmithForm snf = smith_normal_form(c);
  std::vector<std::int64_t> factors;
  std::vector<Coords> images;
  for (std::size_t i = 0; i < r; ++i) {
    const Int& s = snf.s[i][i];
    if (s == 1) continue;
    factors.push_back(s.get_si());
    Coords img(r, 0);
    for (std::size_t k = 0; k < r; ++k) {
      Int acc = 0;
      for (std::size_t m = 0; m < r; ++m) acc += snf.v_inv[i][m] * Int(static_cast<long>(basis_[m][k]));
      img[k] = to_i64_mod(acc, ambient_.factors()[k]);
    }
    images.push_back(std::move(img));
  }
  FinAbGroup abstract(factors);
  return Abstract{abstract, Homomorphism(abstract, ambient_, std::move(images))};
}

std::string Subgroup::str() const {
  auto gens = generators();
  if (gens.empty()) return "{0}";
  std::string s = "<";
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) s += ", ";
    s += coords_str(gens[i]);
  }
  return s + ">";
}

// Smith normal form ------------------------------------------------------------

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  if (a[0].size() != k) throw InvalidArgument("matrix shape mismatch");
  IntMatrix c(n, std::vector<Int>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      if (a[i][l] != 0)
        for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

Int determinant(const IntMatrix& m) {
  // Fraction-free Bareiss elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  IntMatrix a = m;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (const auto& row : m) {
    if (row.size() != cols) throw InvalidArgument("ragged matrix");
  }
  IntMatrix a = m;
  IntMatrix u = identity_matrix(rows), v = identity_matrix(cols), vi = identity_matrix(cols);

  auto swap_rows = [&](std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  };
  auto swap_cols = [&](std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
    for (auto& row : v) std::swap(row[i], row[j]);
    std::swap(vi[i], vi[j]);
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const Int& k) {  // row dst += k row src
    for (std::size_t j = 0; j < cols; ++j) a[dst][j] += k * a[src][j];
    for (std::size_t j = 0; j < rows; ++j) u[dst][j] += k * u[src][j];
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const Int& k) {  // col dst += k col src
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] += k * a[i][src];
    for (std::size_t i = 0; i < cols; ++i) v[i][dst] += k * v[i][src];
    for (std::size_t j = 0; j < cols; ++j) vi[src][j] -= k * vi[dst][j];
  };

  const std::size_t diag = std::min(rows, cols);
  for (std::size_t t = 0; t < diag; ++t) {
    bool any = false;
    while (true) {
      std::size_t pi = t, pj = t;
      bool found = false;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (!found || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
            found = true;
          }
      if (!found) break;
      any = true;
      if (pi != t) swap_rows(t, pi);
      if (pj != t) swap_cols(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Int q = a[i][t] / a[t][t];
        add_row(i, t, -q);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Int q = a[t][j] / a[t][t];
        add_col(j, t, -q);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      bool divisible = true;
      for (std::size_t i = t + 1; i < rows && divisible; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (mod_floor(a[i][j], abs(a[t][t])) != 0) {
            add_row(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (!any) break;
    if (a[t][t] < 0) {
      for (std::size_t j = 0; j < cols; ++j) a[t][j] = -a[t][j];
      for (std::size_t j = 0; j < rows; ++j) u[t][j] = -u[t][j];
    }
  }
  return SmithForm{std::move(u), std::move(a), std::move(v), std::move(vi)};
}

// Duality ------------------------------------------------------------------------

namespace {

// Columns of C = D * B^-1 reduced mod d, in 128-bit arithmetic. Returns false
// on overflow.
bool annihilator_columns_fast(const FinAbGroup& g, const std::vector<Coords>& basis, std::vector<Coords>& cols) {
  const std::size_t r = g.rank();
  std::vector<i128> c(r * r, 0);
  for (std::size_t j = 0; j < r; ++j) {
    c[j * r + j] = g.factors()[j] / basis[j][j];
    for (std::size_t k = j + 1; k < r; ++k) {
      i128 acc = 0;
      for (std::size_t i = j; i < k; ++i) {
        i128 term;
        if (__builtin_mul_overflow(c[j * r + i], static_cast<i128>(basis[i][k]), &term)) return false;
        if (__builtin_add_overflow(acc, term, &acc)) return false;
      }
      const i128 p = basis[k][k];
      if (acc % p != 0) throw Error("internal: non-integral cofactor lattice");
      c[j * r + k] = -acc / p;
    }
  }
  cols.assign(r, Coords(r));
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < r; ++i) cols[k][i] = mod128(c[i * r + k], g.factors()[i]);
  return true;
}

}  // namespace

Subgroup annihilator(const Subgroup& h) {
  const FinAbGroup& g = h.ambient();
  const std::size_t r = g.rank();
  std::vector<Coords> gens;
  if (annihilator_columns_fast(g, h.hermite_basis(), gens)) return Subgroup(g, gens);
  IntMatrix c = cofactor_lattice(g, h.hermite_basis());
  for (std::size_t k = 0; k < r; ++k) {
    Coords col(r);
    for (std::size_t i = 0; i < r; ++i) col[i] = to_i64_mod(c[i][k], g.factors()[i]);
    gens.push_back(std::move(col));
  }
  return Subgroup(g, gens);
}

Quotient quotient_by(const FinAbGroup& g, const Subgroup& h) {
  if (!(h.ambient() == g)) throw InvalidArgument("subgroup is not contained in " + g.str());
  const std::size_t r = g.rank();
  IntMatrix b(r, std::vector<Int>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) b[i][j] = Int(static_cast<long>(h.hermite_basis()[i][j]));
  SmithForm snf = smith_normal_form(b);
  std::vector<std::int64_t> factors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < r; ++i) {
    if (snf.s[i][i] != 1) {
      factors.push_back(snf.s[i][i].get_si());
      kept.push_back(i);
    }
  }
  FinAbGroup q(factors);
  std::vector<Coords> images;
  for (std::size_t i = 0; i < r; ++i) {
    Coords img;
    for (std::size_t k = 0; k < kept.size(); ++k) img.push_back(to_i64_mod(snf.v[i][kept[k]], factors[k]));
    images.push_back(std::move(img));
  }
  return Quotient{q, Homomorphism(g, q, std::move(images))};
}

void for_each_element(const FinAbGroup& g, const std::function<void(const Coords&)>& visit) {
  Coords x = g.zero();
  const std::size_t r = g.rank();
  while (true) {
    visit(x);
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (++x[i] < g.factors()[i]) break;
      x[i] = 0;
      if (i == 0) return;
    }
    if (r == 0) return;
  }
}

std::vector<GroupElement> elements(const FinAbGroup& g, std::uint64_t cap) {
  if (g.order() > cap) throw BudgetExceeded("group order " + std::to_string(g.order()) + " exceeds cap");
  std::vector<GroupElement> out;
  out.reserve(g.order());
  for_each_element(g, [&](const Coords& x) { out.push_back(GroupElement{x}); });
  return out;
}

std::vector<Subgroup> all_subgroups(const FinAbGroup& g, std::uint64_t cap) {
  if (g.order() > cap) throw BudgetExceeded("group too large for subgroup enumeration");
  std::map<std::vector<Coords>, std::size_t> seen;
  std::vector<Subgroup> out;
  std::vector<Subgroup> cyclic;
  auto add = [&](const Subgroup& s) {
    if (seen.emplace(s.hermite_basis(), out.size()).second) {
      out.push_back(s);
      return true;
    }
    return false;
  };
  for_each_element(g, [&](const Coords& x) {
    Subgroup s(g, {x});
    if (add(s)) cyclic.push_back(s);
  });
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const Subgroup& c : cyclic) add(out[i].join(c));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& x, const Subgroup& y) {
    if (x.order() != y.order()) return x.order() < y.order();
    return x.hermite_basis() < y.hermite_basis();
  });
  return out;
}

std::vector<FinAbGroup> groups_up_to_order(std::uint64_t n) {
  std::vector<FinAbGroup> out{FinAbGroup()};
  std::function<void(std::vector<std::int64_t>&, std::uint64_t)> rec =
      [&](std::vector<std::int64_t>& chain, std::uint64_t order) {
        const std::int64_t start = chain.empty() ? 2 : chain.back();
        for (std::int64_t d = start; order * static_cast<std::uint64_t>(d) <= n; d += start) {
          chain.push_back(d);
          out.emplace_back(chain);
          rec(chain, order * static_cast<std::uint64_t>(d));
          chain.pop_back();
        }
      };
  std::vector<std::int64_t> chain;
  rec(chain, 1);
  return out;
}

}  // namespace charsub
