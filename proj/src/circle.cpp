#include "charsub/circle.hpp"

#include <cctype>
#include <cstdio>
#include <mutex>
#include <sstream>

namespace charsub {

namespace {

constexpr unsigned kMaxExtraBits = 4096;

Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

std::size_t bit_length(const Int& n) {
  return n == 0 ? 0 : mpz_sizeinbase(n.get_mpz_t(), 2);
}

// Splits d = k^2 * s with s squarefree. Trial division; inputs are small.
void split_square(const Int& d, Int& k, Int& s) {
  k = 1;
  s = d;
  for (Int p = 2; p * p <= s; ++p) {
    while (mod_floor(s, p * p) == 0) {
      s /= p * p;
      k *= p;
    }
  }
}

std::string decimal(const Rat& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", q.get_d());
  return buf;
}

// Reduces a real enclosure (width <= 2^-p at precision p) modulo 1 and
// rounds outward to width <= 2^-k. `raw` must enclose an irrational value.
Interval reduce_mod1(const std::function<Interval(unsigned)>& raw, unsigned k) {
  for (unsigned extra = 2; extra < kMaxExtraBits; extra += 8) {
    Interval iv = raw(k + extra);
    Int f = floor_rat(iv.lo);
    if (floor_rat(iv.hi) != f) continue;
    Interval shifted{iv.lo - Rat(f), iv.hi - Rat(f)};
    Interval out = round_outward(shifted, k + 2);
    if (out.hi < 1 && out.width() <= inv_pow2(k)) return out;
  }
  throw Error("enclosure cannot be separated from an integer; value may be rational");
}

// atanh(y) for dyadic 0 <= y <= 1/3 by its positive series.
Interval atanh_series(const Rat& y, unsigned bits) {
  Rat y2 = y * y;
  Rat term = y;
  Rat sum = 0;
  Rat eps = inv_pow2(bits + 4);
  for (unsigned j = 0;; ++j) {
    sum += term / (2 * j + 1);
    term *= y2;
    // tail <= term / ((2j+3)(1 - y^2)) <= term * 9/8
    Rat tail = term * Rat(9, 8) / (2 * j + 3);
    if (tail < eps) return round_outward({sum, sum + tail}, bits + 2);
  }
}

Interval ln2_enclosure(unsigned bits) {
  Interval a = atanh_series(Rat(1, 3), bits + 1);
  return {a.lo * 2, a.hi * 2};
}

// Alternating arctangent series for atan(1/x), integer x >= 2.
Interval atan_inv(long x, unsigned bits) {
  Rat eps = inv_pow2(bits + 4);
  Rat sum = 0;
  Int xpow = x;
  Int x2 = Int(x) * x;
  for (long k = 0;; ++k) {
    Rat term = make_rat(Int(1), Int(2 * k + 1) * xpow);
    if (term < eps) return {sum - term, sum + term};
    if (k % 2 == 0) sum += term; else sum -= term;
    xpow *= x2;
  }
}

Interval compute_pi(unsigned bits) {
  Interval a = atan_inv(5, bits + 6);
  Interval b = atan_inv(239, bits + 6);
  Interval pi{a.lo * 16 - b.hi * 4, a.hi * 16 - b.lo * 4};
  return round_outward(pi, bits + 2);
}

// Taylor series of sin at a rational 0 <= y <= 2; alternating, so the
// first omitted term bounds the error.
Interval sin_taylor(const Rat& y, unsigned bits) {
  Rat y2 = y * y;
  Rat term = y;
  Rat sum = 0;
  Rat eps = inv_pow2(bits + 4);
  for (unsigned k = 0;; ++k) {
    sum += term;
    term = -term * y2 / ((2 * k + 2) * (2 * k + 3));
    if (abs(term) < eps) return {sum - abs(term), sum + abs(term)};
  }
}

}  // namespace

// QuadraticSurd ------------------------------------------------------------

Interval QuadraticSurd::enclose(unsigned bits) const {
  unsigned p = bits + static_cast<unsigned>(bit_length(abs(b))) + 2;
  Int scale = pow2(p);
  Int s = isqrt(d * scale * scale);
  Rat root_lo = make_rat(s, scale);
  Rat root_hi = make_rat(s + 1, scale);
  Rat lo = (Rat(a) + Rat(b) * (b > 0 ? root_lo : root_hi)) / Rat(c);
  Rat hi = (Rat(a) + Rat(b) * (b > 0 ? root_hi : root_lo)) / Rat(c);
  return {lo, hi};
}

std::string QuadraticSurd::str() const {
  return "surd(" + a.get_str() + "," + b.get_str() + "," + d.get_str() + "," + c.get_str() + ")";
}

// CirclePoint --------------------------------------------------------------

CirclePoint::CirclePoint() : rep_(Rat(0)) {}

CirclePoint CirclePoint::rational(const Rat& q) {
  CirclePoint p;
  p.rep_ = frac(q);
  return p;
}

CirclePoint CirclePoint::surd(const Int& a0, const Int& b0, const Int& d0, const Int& c0) {
  if (c0 == 0) throw InvalidArgument("surd with zero denominator");
  if (d0 < 0) throw InvalidArgument("surd with negative radicand");
  Int a = a0, b = b0, c = c0;
  if (c < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  if (b == 0 || d0 == 0) return rational(make_rat(a, c));
  if (is_square(d0)) return rational(make_rat(a + b * isqrt(d0), c));
  Int k, s;
  split_square(d0, k, s);
  b *= k;
  Int g = gcd(gcd(a, b), c);
  a /= g;
  b /= g;
  c /= g;
  a = mod_floor(a, c);
  QuadraticSurd form{a, b, s, c};
  auto refine = std::make_shared<const Refiner>([form](unsigned kbits) {
    return reduce_mod1([&form](unsigned p) { return form.enclose(p); }, kbits);
  });
  CirclePoint p;
  p.rep_ = Irrational{std::move(refine), form, form.str()};
  return p;
}

CirclePoint CirclePoint::from_refiner(Refiner refine, std::string label) {
  CirclePoint p;
  p.rep_ = Irrational{std::make_shared<const Refiner>(std::move(refine)), std::nullopt,
                      std::move(label)};
  return p;
}

const Rat& CirclePoint::value() const {
  if (!is_rational()) throw InvalidArgument("irrational circle point has no exact value");
  return std::get<Rat>(rep_);
}

const QuadraticSurd* CirclePoint::surd_form() const {
  if (auto* irr = std::get_if<Irrational>(&rep_); irr && irr->surd) return &*irr->surd;
  return nullptr;
}

Interval CirclePoint::refine(unsigned k) const {
  if (is_rational()) return {value(), value()};
  return (*std::get<Irrational>(rep_).refine)(k);
}

std::string CirclePoint::str() const {
  if (is_rational()) {
    const Rat& q = value();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  }
  return std::get<Irrational>(rep_).label;
}

bool CirclePoint::operator==(const CirclePoint& other) const {
  if (is_rational() || other.is_rational()) {
    return is_rational() && other.is_rational() && value() == other.value();
  }
  const auto* s1 = surd_form();
  const auto* s2 = other.surd_form();
  if (s1 && s2) return *s1 == *s2;
  return std::get<Irrational>(rep_).refine == std::get<Irrational>(other.rep_).refine;
}

CirclePoint operator+(const CirclePoint& x, const CirclePoint& y) {
  if (x.is_rational() && y.is_rational()) return CirclePoint::rational(x.value() + y.value());
  const QuadraticSurd* sx = x.surd_form();
  const QuadraticSurd* sy = y.surd_form();
  if (sx && y.is_rational()) {
    const Rat& q = y.value();
    return CirclePoint::surd(sx->a * q.get_den() + q.get_num() * sx->c, sx->b * q.get_den(),
                             sx->d, sx->c * q.get_den());
  }
  if (sy && x.is_rational()) return y + x;
  if (sx && sy && sx->d == sy->d) {
    return CirclePoint::surd(sx->a * sy->c + sy->a * sx->c, sx->b * sy->c + sy->b * sx->c, sx->d,
                             sx->c * sy->c);
  }
  std::string label = "(" + x.str() + "+" + y.str() + ")";
  return CirclePoint::from_refiner(
      [x, y](unsigned k) {
        return reduce_mod1(
            [&](unsigned p) {
              Interval a = x.refine(p + 1);
              Interval b = y.refine(p + 1);
              return Interval{a.lo + b.lo, a.hi + b.hi};
            },
            k);
      },
      label);
}

CirclePoint operator-(const CirclePoint& x) {
  if (x.is_rational()) return CirclePoint::rational(-x.value());
  if (const QuadraticSurd* s = x.surd_form()) return CirclePoint::surd(-s->a, -s->b, s->d, s->c);
  return CirclePoint::from_refiner(
      [x](unsigned k) {
        return reduce_mod1(
            [&](unsigned p) {
              Interval a = x.refine(p);
              return Interval{-a.hi, -a.lo};
            },
            k);
      },
      "-" + x.str());
}

CirclePoint canonicalize(const Int& numerator, const Int& denominator) {
  if (denominator == 0) throw InvalidArgument("zero denominator");
  return CirclePoint::rational(make_rat(numerator, denominator));
}

// Norm ---------------------------------------------------------------------

Rat NormValue::lower() const {
  return is_exact() ? exact() : std::get<Interval>(rep_).lo;
}

Rat NormValue::upper() const {
  return is_exact() ? exact() : std::get<Interval>(rep_).hi;
}

std::string NormValue::str() const {
  if (is_exact()) return to_string(exact());
  return "[" + decimal(lower()) + ", " + decimal(upper()) + "]";
}

NormValue circle_norm(const CirclePoint& x, unsigned bits) {
  if (x.is_rational()) {
    const Rat& r = x.value();
    return NormValue(r <= Rat(1, 2) ? r : Rat(1) - r);
  }
  const Rat half(1, 2);
  for (unsigned k = bits + 1; k < bits + kMaxExtraBits; k += 4) {
    Interval iv = x.refine(k);
    if (iv.hi < half) return NormValue(iv);
    if (iv.lo > half) return NormValue(Interval{Rat(1) - iv.hi, Rat(1) - iv.lo});
  }
  throw Error("norm enclosure cannot be separated from 1/2");
}

CirclePoint pair(const Int& u, const CirclePoint& x) {
  if (u == 0) return CirclePoint();
  if (x.is_rational()) return CirclePoint::rational(Rat(u) * x.value());
  if (const QuadraticSurd* s = x.surd_form()) return CirclePoint::surd(u * s->a, u * s->b, s->d, s->c);
  unsigned extra = static_cast<unsigned>(bit_length(abs(u))) + 1;
  return CirclePoint::from_refiner(
      [u, x, extra](unsigned k) {
        return reduce_mod1(
            [&](unsigned p) {
              Interval a = x.refine(p + extra);
              Rat ul(u);
              return u > 0 ? Interval{ul * a.lo, ul * a.hi} : Interval{ul * a.hi, ul * a.lo};
            },
            k);
      },
      u.get_str() + "*" + x.str());
}

// Constants and elementary functions ---------------------------------------

Interval pi_enclosure(unsigned bits) {
  static constexpr unsigned kCachedBits = 320;
  static const Interval cached = compute_pi(kCachedBits);
  if (bits + 2 <= kCachedBits) return round_outward(cached, bits);
  return compute_pi(bits);
}

Interval sqrt_enclosure(const Rat& q, unsigned bits) {
  if (q < 0) throw InvalidArgument("square root of a negative rational");
  Int nd = q.get_num() * q.get_den();
  if (is_square(nd)) {
    Rat r = make_rat(isqrt(nd), q.get_den());
    return {r, r};
  }
  Int scale = pow2(bits);
  Int s = isqrt(nd * scale * scale);
  Int den = q.get_den() * scale;
  return {make_rat(s, den), make_rat(s + 1, den)};
}

Interval sin_pi_enclosure(const Rat& r, unsigned bits) {
  if (r < 0 || r > Rat(1, 2)) throw InvalidArgument("sin_pi_enclosure expects r in [0, 1/2]");
  if (r == 0) return {Rat(0), Rat(0)};
  if (r == Rat(1, 2)) return {Rat(1), Rat(1)};
  Interval pi = pi_enclosure(bits + 6);
  Interval x = round_outward({pi.lo * r, pi.hi * r}, bits + 6);
  Interval lo = sin_taylor(x.lo, bits + 2);
  Rat upper = 1;
  if (x.hi * 2 < pi.lo) upper = std::min(Rat(1), sin_taylor(x.hi, bits + 2).hi);
  Rat lower = lo.lo < 0 ? Rat(0) : lo.lo;
  return round_outward({lower, upper}, bits + 2);
}

Interval log_enclosure(const Rat& x, unsigned bits) {
  if (x <= 0) throw InvalidArgument("logarithm of a nonpositive rational");
  long k = static_cast<long>(bit_length(x.get_num())) - static_cast<long>(bit_length(x.get_den()));
  Rat reduced = x;
  if (k > 0) reduced /= Rat(pow2(static_cast<unsigned long>(k)));
  if (k < 0) reduced *= Rat(pow2(static_cast<unsigned long>(-k)));
  while (reduced >= 2) {
    reduced /= 2;
    ++k;
  }
  while (reduced < 1) {
    reduced *= 2;
    --k;
  }
  unsigned kbits = static_cast<unsigned>(bit_length(Int(std::labs(k)))) + 2;
  Rat y = (reduced - 1) / (reduced + 1);
  Interval yr = round_outward({y, y}, bits + 8);
  Interval a_lo = atanh_series(yr.lo, bits + 4);
  Interval a_hi = atanh_series(yr.hi, bits + 4);
  Interval ln2 = ln2_enclosure(bits + kbits + 4);
  Rat kr(k);
  Interval kln2 = k >= 0 ? Interval{kr * ln2.lo, kr * ln2.hi} : Interval{kr * ln2.hi, kr * ln2.lo};
  return round_outward({kln2.lo + a_lo.lo * 2, kln2.hi + a_hi.hi * 2}, bits + 2);
}

// Chord --------------------------------------------------------------------

std::string ChordValue::str() const {
  if (exact_square) {
    if (*exact_square == 0) return "0";
    if (*exact_square == 1) return "1";
    if (*exact_square == 4) return "2";
    return "sqrt(" + to_string(*exact_square) + ")";
  }
  return "[" + decimal(enclosure.lo) + ", " + decimal(enclosure.hi) + "]";
}

ChordValue chord_of_norm_interval(const Interval& norm, unsigned bits) {
  Interval lo = sin_pi_enclosure(norm.lo, bits + 1);
  Interval hi = sin_pi_enclosure(norm.hi, bits + 1);
  return ChordValue{{lo.lo * 2, hi.hi * 2}, std::nullopt};
}

ChordValue chord_distance(const CirclePoint& t, unsigned bits) {
  NormValue n = circle_norm(t, bits + 2);
  if (n.is_exact()) {
    const Rat& r = n.exact();
    std::optional<Rat> square;
    if (r == 0) square = Rat(0);
    else if (r == Rat(1, 6)) square = Rat(1);
    else if (r == Rat(1, 4)) square = Rat(2);
    else if (r == Rat(1, 3)) square = Rat(3);
    else if (r == Rat(1, 2)) square = Rat(4);
    if (square) return ChordValue{sqrt_enclosure(*square, bits), square};
    return chord_of_norm_interval({r, r}, bits);
  }
  return chord_of_norm_interval({n.lower(), n.upper()}, bits);
}

// Parsing ------------------------------------------------------------------

namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Int parse_int(const std::string& text) {
  std::string t = strip(text);
  if (!t.empty() && t[0] == '+') t = t.substr(1);
  Int v;
  if (t.empty() || v.set_str(t, 10) != 0) throw InvalidArgument("not an integer: '" + text + "'");
  return v;
}

}  // namespace

CirclePoint parse_circle_point(const std::string& text) {
  std::string t = strip(text);
  if (t.rfind("surd(", 0) == 0) {
    if (t.back() != ')') throw InvalidArgument("unterminated surd literal: " + t);
    std::string body = t.substr(5, t.size() - 6);
    std::vector<std::string> parts;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 4) throw InvalidArgument("surd literal needs four fields: " + t);
    return CirclePoint::surd(parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]),
                             parse_int(parts[3]));
  }
  std::size_t slash = t.find('/');
  if (slash == std::string::npos) return canonicalize(parse_int(t), 1);
  return canonicalize(parse_int(t.substr(0, slash)), parse_int(t.substr(slash + 1)));
}

}  // namespace charsub
