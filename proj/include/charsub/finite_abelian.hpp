#pragma once

// Finite abelian groups in invariant-factor form and their exact duality.
//
// G = Z_{d_1} x ... x Z_{d_r} with d_1 | d_2 | ... | d_r and every d_i > 1.
// The dual group is identified with G itself through the pairing
//   (chi, x) = sum_i chi_i * x_i / d_i  (mod 1),
// so subgroups of the dual are represented by the same Subgroup type.

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "charsub/circle.hpp"
#include "charsub/common.hpp"

namespace charsub {

using Coords = std::vector<std::int64_t>;
using IntMatrix = std::vector<std::vector<Int>>;

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

struct GroupElement {
  Coords coords;
  auto operator<=>(const GroupElement&) const = default;
};

struct Character {
  Coords coords;
  auto operator<=>(const Character&) const = default;
};

class FinAbGroup {
 public:
  /// The trivial group.
  FinAbGroup() = default;
  /// Factors equal to 1 are dropped; the rest must form a divisibility chain.
  explicit FinAbGroup(std::vector<std::int64_t> invariant_factors);
  static FinAbGroup cyclic(std::int64_t n) { return FinAbGroup({n}); }

  const std::vector<std::int64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::uint64_t order() const;
  /// Largest invariant factor; 1 for the trivial group.
  std::int64_t exponent() const { return factors_.empty() ? 1 : factors_.back(); }

  Coords zero() const { return Coords(rank(), 0); }
  Coords reduce(Coords x) const;
  Coords add(const Coords& x, const Coords& y) const;
  Coords neg(const Coords& x) const;
  Coords scale(std::int64_t k, const Coords& x) const;
  bool valid(const Coords& x) const;

  bool operator==(const FinAbGroup&) const = default;
  /// "Z4 x Z8"; the trivial group prints as "Z1".
  std::string str() const;

 private:
  std::vector<std::int64_t> factors_;
};

/// Parses "Z4 x Z8", "Z1" or "trivial".
FinAbGroup parse_group(const std::string& text);

/// Numerator of the pairing over the common denominator exponent(G).
std::int64_t pair_numerator(const FinAbGroup& g, const Coords& chi, const Coords& x);
/// (chi, x) as an exact circle point.
CirclePoint dual_pair_finite(const FinAbGroup& g, const Character& chi, const GroupElement& x);

// Homomorphism ------------------------------------------------------------

/// A homomorphism given by the images of the standard generators of `source`.
class Homomorphism {
 public:
  Homomorphism(FinAbGroup source, FinAbGroup target, std::vector<Coords> images);
  static Homomorphism identity(const FinAbGroup& g);

  const FinAbGroup& source() const { return source_; }
  const FinAbGroup& target() const { return target_; }
  const std::vector<Coords>& images() const { return images_; }
  Coords apply(const Coords& x) const;

 private:
  FinAbGroup source_;
  FinAbGroup target_;
  std::vector<Coords> images_;
};

// Subgroup ----------------------------------------------------------------

class Subgroup {
 public:
  struct Abstract;

  /// The subgroup of `ambient` generated by `generators`.
  Subgroup(FinAbGroup ambient, const std::vector<Coords>& generators);
  static Subgroup trivial(const FinAbGroup& g) { return Subgroup(g, {}); }
  static Subgroup whole(const FinAbGroup& g);

  const FinAbGroup& ambient() const { return ambient_; }
  /// Canonical upper-triangular basis of the preimage lattice in Z^r, with
  /// pivots dividing the invariant factors and entries above each pivot
  /// reduced into [0, pivot).
  const std::vector<Coords>& hermite_basis() const { return basis_; }
  /// Nonzero basis rows, as elements of the ambient group.
  std::vector<Coords> generators() const;

  std::uint64_t order() const;
  bool contains(const Coords& x) const;
  bool is_subgroup_of(const Subgroup& other) const;
  bool operator==(const Subgroup& other) const {
    return ambient_ == other.ambient_ && basis_ == other.basis_;
  }
  std::size_t hash() const;

  std::vector<Coords> elements(std::uint64_t cap = kDefaultEnumerationCap) const;
  void for_each_element(const std::function<void(const Coords&)>& visit) const;

  Subgroup join(const Subgroup& other) const;
  Subgroup meet(const Subgroup& other) const;

  /// This subgroup as an abstract group together with its inclusion map.
  Abstract as_abstract() const;

  std::string str() const;

 private:
  void insert(Coords& v);

  FinAbGroup ambient_;
  std::vector<Coords> basis_;
};

struct Subgroup::Abstract {
  FinAbGroup group;
  Homomorphism embedding;
};

struct SmithForm {
  IntMatrix u;     // unimodular, rows x rows
  IntMatrix s;     // diagonal, d_1 | d_2 | ..., nonnegative
  IntMatrix v;     // unimodular, cols x cols
  IntMatrix v_inv;
};

/// U * M * V = S with the diagonal of S in divisibility order.
SmithForm smith_normal_form(const IntMatrix& m);

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix identity_matrix(std::size_t n);
Int determinant(const IntMatrix& m);

/// All characters vanishing on h (a subgroup of the dual of the same group).
Subgroup annihilator(const Subgroup& h);

struct Quotient {
  FinAbGroup group;
  Homomorphism projection;
};

/// G / H in invariant-factor form with the projection map.
Quotient quotient_by(const FinAbGroup& g, const Subgroup& h);

std::vector<GroupElement> elements(const FinAbGroup& g, std::uint64_t cap = kDefaultEnumerationCap);
void for_each_element(const FinAbGroup& g, const std::function<void(const Coords&)>& visit);

/// Every subgroup of g, in a deterministic order.
std::vector<Subgroup> all_subgroups(const FinAbGroup& g, std::uint64_t cap = kDefaultEnumerationCap);
/// Every finite abelian group of order at most n in invariant-factor form.
std::vector<FinAbGroup> groups_up_to_order(std::uint64_t n);

std::string coords_str(const Coords& x);

}  // namespace charsub
