#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "charsub/circle.hpp"
#include "oracles.hpp"

using namespace charsub;

namespace {

CirclePoint q(long p, long d) { return CirclePoint::rational(make_rat(Int(p), Int(d))); }

}  // namespace

TEST(Canonicalize, ReducesModOne) {
  EXPECT_EQ(canonicalize(7, 3), q(1, 3));
  EXPECT_EQ(canonicalize(-1, 4), q(3, 4));
  EXPECT_EQ(canonicalize(0, 5).str(), "0/1");
  EXPECT_THROW(canonicalize(1, 0), InvalidArgument);
}

TEST(Norm, Rationals) {
  EXPECT_EQ(circle_norm(q(1, 3)).exact(), Rat(1, 3));
  EXPECT_EQ(circle_norm(q(7, 10)).exact(), Rat(3, 10));
  EXPECT_EQ(circle_norm(q(1, 2)).exact(), Rat(1, 2));
}

TEST(Norm, Sqrt2EnclosureIsTight) {
  CirclePoint s = CirclePoint::surd(0, 1, 2, 1);
  NormValue n = circle_norm(s, 20);
  EXPECT_FALSE(n.is_exact());
  EXPECT_LE(n.upper() - n.lower(), inv_pow2(20));
  const double ref = std::sqrt(2.0) - 1;
  EXPECT_LE(n.lower().get_d(), ref);
  EXPECT_GE(n.upper().get_d(), ref);
}

TEST(Norm, MatchesOracleOnRandomRationals) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    long d = 1 + static_cast<long>(rng() % 500);
    long p = static_cast<long>(rng() % 4000) - 2000;
    auto [num, den] = oracle::norm_rational(p, d);
    EXPECT_EQ(circle_norm(canonicalize(p, d)).exact(), make_rat(Int(num), Int(den)));
  }
}

TEST(Pair, Examples) {
  EXPECT_EQ(pair(3, q(1, 6)), q(1, 2));
  EXPECT_EQ(pair(6, q(1, 6)), CirclePoint());
  Int big;
  mpz_ui_pow_ui(big.get_mpz_t(), 2, 10);
  // 2^10 mod 3 by repeated squaring in the oracle
  long r = 1;
  for (int i = 0; i < 10; ++i) r = r * 2 % 3;
  EXPECT_EQ(pair(big, q(1, 3)), q(r, 3));
}

TEST(Pair, IsAHomomorphismInBothArguments) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    Int a = static_cast<long>(rng() % 1000) - 500, b = static_cast<long>(rng() % 1000) - 500;
    CirclePoint x = canonicalize(static_cast<long>(rng() % 97), 97), y = canonicalize(static_cast<long>(rng() % 60), 60);
    EXPECT_EQ(pair(a + b, x), pair(a, x) + pair(b, x));
    EXPECT_EQ(pair(a, x + y), pair(a, x) + pair(a, y));
  }
}

TEST(Pair, SurdsStaySymbolic) {
  CirclePoint r2 = CirclePoint::surd(0, 1, 2, 1);
  CirclePoint r8 = CirclePoint::surd(0, 1, 8, 1);
  EXPECT_EQ(pair(2, r2), r8);
  EXPECT_EQ(pair(2, r2) - r8, CirclePoint());
  EXPECT_FALSE(r2 == CirclePoint::surd(0, 1, 3, 1));
}

TEST(Chord, ExactValues) {
  EXPECT_EQ(chord_distance(CirclePoint()).upper(), 0);
  EXPECT_EQ(chord_distance(q(1, 2)).lower(), 2);
  EXPECT_EQ(chord_distance(q(1, 2)).upper(), 2);
  ChordValue c6 = chord_distance(q(1, 6));
  EXPECT_EQ(c6.lower(), 1);
  EXPECT_EQ(c6.upper(), 1);
  ChordValue c3 = chord_distance(q(1, 3));
  ASSERT_TRUE(c3.exact_square.has_value());
  EXPECT_EQ(*c3.exact_square, 3);
}

TEST(Chord, EnclosesLongDoubleSine) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    long d = 2 + static_cast<long>(rng() % 1000), p = static_cast<long>(rng() % d);
    ChordValue c = chord_distance(canonicalize(p, d), 40);
    auto [num, den] = oracle::norm_rational(p, d);
    long double ref = 2 * std::sin(3.14159265358979323846264338327950288L * num / den);
    EXPECT_LE(c.lower().get_d(), static_cast<double>(ref) + 1e-12);
    EXPECT_GE(c.upper().get_d(), static_cast<double>(ref) - 1e-12);
    EXPECT_LE(Rat(c.upper() - c.lower()).get_d(), 1e-9);
  }
}

TEST(Chord, MetricProperties) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 300; ++i) {
    CirclePoint x = canonicalize(static_cast<long>(rng() % 120), 120), y = canonicalize(static_cast<long>(rng() % 77), 77);
    EXPECT_EQ(chord_distance(x - y).enclosure.lo, chord_distance(y - x).enclosure.lo);
    // triangle inequality through 0
    EXPECT_LE(chord_distance(x - y).lower(), chord_distance(x).upper() + chord_distance(y).upper());
  }
}

TEST(Parse, RoundTrip) {
  for (const char* s : {"1/3", "0/1", "surd(0,1,2,1)", "surd(1,3,5,7)"}) {
    CirclePoint p = parse_circle_point(s);
    EXPECT_EQ(parse_circle_point(p.str()), p) << s;
  }
  EXPECT_EQ(parse_circle_point("5/4"), q(1, 4));
  EXPECT_THROW(parse_circle_point("1/0"), InvalidArgument);
  EXPECT_THROW(parse_circle_point("abc"), InvalidArgument);
  EXPECT_EQ(CirclePoint::surd(0, 3, 4, 1), CirclePoint()) << "sqrt(4) collapses to a rational";
}

TEST(Constants, PiAndLog) {
  Interval pi = pi_enclosure(60);
  EXPECT_LE(pi.lo.get_d(), 3.141592653589793);
  EXPECT_GE(pi.hi.get_d(), 3.141592653589793);
  Interval l = log_enclosure(Rat(2), 60);
  EXPECT_LE(l.lo.get_d(), std::log(2.0) + 1e-15);
  EXPECT_GE(l.hi.get_d(), std::log(2.0) - 1e-15);
}
