#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace charsub {

using Int = mpz_class;
using Rat = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: zero denominators, shape mismatches, bad literals.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

// A search or enumeration ran past its configured cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Closed rational interval [lo, hi].
struct Interval {
  Rat lo;
  Rat hi;

  Rat width() const { return hi - lo; }
  bool contains(const Rat& q) const { return lo <= q && q <= hi; }
};

inline Rat make_rat(const Int& num, const Int& den) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Int floor_rat(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Int ceil_rat(const Rat& q) {
  Int r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// Fractional part in [0, 1).
inline Rat frac(const Rat& q) {
  if (q >= 0 && q < 1) return q;
  Rat r;
  mpz_fdiv_r(mpq_numref(r.get_mpq_t()), q.get_num_mpz_t(), q.get_den_mpz_t());
  mpz_set(mpq_denref(r.get_mpq_t()), q.get_den_mpz_t());
  return r;
}

/// Nonnegative residue of a modulo m (m > 0).
inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int lcm(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Int pow2(unsigned long k) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

/// 2^-k as a rational.
inline Rat inv_pow2(unsigned long k) { return make_rat(Int(1), pow2(k)); }

inline std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Outward rounding of an interval to dyadic endpoints with denominator 2^bits.
inline Interval round_outward(const Interval& iv, unsigned long bits) {
  Int scale = pow2(bits);
  return {make_rat(floor_rat(iv.lo * Rat(scale)), scale),
          make_rat(ceil_rat(iv.hi * Rat(scale)), scale)};
}

}  // namespace charsub
