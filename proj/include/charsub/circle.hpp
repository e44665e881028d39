#pragma once

// Exact and certified arithmetic on the circle group T = R/Z.
//
// Points are stored additively. A point is either an exact rational in
// canonical form or an irrational given by a refinable dyadic enclosure.
// Quadratic surds (a + b*sqrt(D))/c carry a symbolic descriptor so that
// identities between them can be decided exactly.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "charsub/common.hpp"

namespace charsub {

/// (a + b*sqrt(D))/c in canonical form: c > 0, D > 1 squarefree, b != 0,
/// gcd(a, b, c) = 1, and 0 <= a < c is not imposed (see CirclePoint for the
/// reduced form used on the circle).
struct QuadraticSurd {
  Int a;
  Int b;
  Int d;
  Int c;

  bool operator==(const QuadraticSurd&) const = default;

  /// Enclosure of the real value with width <= 2^-bits.
  Interval enclose(unsigned bits) const;
  std::string str() const;
};

/// Produces an enclosure inside [0, 1) of width <= 2^-k for every k.
using Refiner = std::function<Interval(unsigned k)>;

class CirclePoint {
 public:
  /// The identity 0.
  CirclePoint();

  static CirclePoint rational(const Rat& q);
  /// Returns an exact rational when D is a perfect square.
  static CirclePoint surd(const Int& a, const Int& b, const Int& d, const Int& c);
  /// An irrational point known only through enclosures. Not serializable.
  static CirclePoint from_refiner(Refiner refine, std::string label = "refiner");

  bool is_rational() const { return std::holds_alternative<Rat>(rep_); }
  /// Value in [0, 1). Throws InvalidArgument for irrational points.
  const Rat& value() const;
  const QuadraticSurd* surd_form() const;
  bool serializable() const { return is_rational() || surd_form() != nullptr; }

  /// Dyadic enclosure in [0, 1) of width <= 2^-k. Exact points give [v, v].
  Interval refine(unsigned k) const;

  std::string str() const;

  /// Structural equality: decides equality exactly for rationals and surds;
  /// refiner-backed points compare equal only to themselves.
  bool operator==(const CirclePoint& other) const;

  friend CirclePoint operator+(const CirclePoint& x, const CirclePoint& y);
  friend CirclePoint operator-(const CirclePoint& x);
  friend CirclePoint operator-(const CirclePoint& x, const CirclePoint& y) { return x + (-y); }

 private:
  struct Irrational {
    std::shared_ptr<const Refiner> refine;
    std::optional<QuadraticSurd> surd;  // surd value taken mod 1
    std::string label;
  };

  std::variant<Rat, Irrational> rep_;
};

/// Canonical representative of numerator/denominator mod 1.
CirclePoint canonicalize(const Int& numerator, const Int& denominator);

/// Distance to the nearest integer. Exact for rationals.
class NormValue {
 public:
  explicit NormValue(Rat exact) : rep_(std::move(exact)) {}
  explicit NormValue(Interval enclosure) : rep_(std::move(enclosure)) {}

  bool is_exact() const { return std::holds_alternative<Rat>(rep_); }
  const Rat& exact() const { return std::get<Rat>(rep_); }
  Rat lower() const;
  Rat upper() const;
  std::string str() const;

 private:
  std::variant<Rat, Interval> rep_;
};

inline constexpr unsigned kDefaultBits = 30;

NormValue circle_norm(const CirclePoint& x, unsigned bits = kDefaultBits);

/// u * x mod 1.
CirclePoint pair(const Int& u, const CirclePoint& x);

/// |1 - exp(2 pi i t)| = 2 sin(pi ||t||), in [0, 2].
struct ChordValue {
  Interval enclosure;
  std::optional<Rat> exact_square;  // set when ||t|| is 0, 1/6, 1/4, 1/3 or 1/2

  Rat lower() const { return enclosure.lo; }
  Rat upper() const { return enclosure.hi; }
  std::string str() const;
};

ChordValue chord_distance(const CirclePoint& t, unsigned bits = kDefaultBits);
/// Chord of a norm already known to lie in the given interval inside [0, 1/2].
ChordValue chord_of_norm_interval(const Interval& norm, unsigned bits = kDefaultBits);

/// Certified enclosures of elementary constants, width <= 2^-bits.
Interval pi_enclosure(unsigned bits);
/// sin(pi * r) for rational r in [0, 1/2].
Interval sin_pi_enclosure(const Rat& r, unsigned bits);
/// sqrt(q) for rational q >= 0.
Interval sqrt_enclosure(const Rat& q, unsigned bits);
/// Natural logarithm of a rational x > 0.
Interval log_enclosure(const Rat& x, unsigned bits);

/// Parses "p/q", "p", or "surd(a,b,D,c)".
CirclePoint parse_circle_point(const std::string& text);

}  // namespace charsub
