#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "charsub/polish.hpp"

using namespace charsub;

namespace {

CirclePoint q(long p, long d) { return CirclePoint::rational(make_rat(Int(p), Int(d))); }

TInfElem fin(std::map<long, CirclePoint> e) {
  std::map<Index, CirclePoint> m;
  for (auto& [k, v] : e) m[Index(k)] = v;
  return TInfElem::finite(m);
}

}  // namespace

TEST(ZInf, RunsNormalize) {
  ZInfElem a = ZInfElem::indicator(3, 7) + ZInfElem::unit(5, -1);
  EXPECT_EQ(a.coeff(5), 0);
  EXPECT_EQ(a.coeff(4), 1);
  EXPECT_EQ(a.l1(), 4);
  EXPECT_EQ((a - a).is_zero(), true);
  EXPECT_EQ(ZInfElem::indicator(1, 1000000).l1(), 1000000);
  EXPECT_EQ(ZInfElem::indicator(1, 4).scaled(3).l2_squared(), 36);
}

TEST(ZInf, AgreesWithMapArithmetic) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 300; ++t) {
    std::map<Index, Int> a, b;
    for (int i = 0; i < 6; ++i) {
      a[Index(static_cast<long>(1 + rng() % 20))] = static_cast<long>(rng() % 7) - 3;
      b[Index(static_cast<long>(1 + rng() % 20))] = static_cast<long>(rng() % 7) - 3;
    }
    ZInfElem za = ZInfElem::from_map(a), zb = ZInfElem::from_map(b);
    for (long k = 1; k <= 21; ++k) {
      Int ea = a.count(Index(k)) ? a[Index(k)] : Int(0), eb = b.count(Index(k)) ? b[Index(k)] : Int(0);
      EXPECT_EQ((za + zb).coeff(k), ea + eb);
      EXPECT_EQ(za.scaled(-2).coeff(k), -2 * ea);
    }
  }
}

TEST(MetricD0, Examples) {
  EXPECT_EQ(metric_d0(fin({{1, q(1, 3)}}), fin({{1, q(1, 3)}})).value.hi, 0);
  MetricResult a = metric_d0(fin({{1, q(1, 2)}}), TInfElem());
  EXPECT_EQ(a.value.lo, 2);
  EXPECT_EQ(a.value.hi, 2);
  MetricResult b = metric_d0(fin({{3, q(1, 6)}}), TInfElem());
  EXPECT_EQ(b.value.lo, 1);
  EXPECT_EQ(b.value.hi, 1);
}

TEST(MetricD1, Examples) {
  MetricResult a = metric_d1(fin({{1, q(1, 4)}, {2, q(1, 4)}}), TInfElem());
  ASSERT_EQ(a.kind, MetricResult::Kind::Value);
  const double ref = 2 * std::sqrt(2.0);
  EXPECT_LE(a.value.lo.get_d(), ref);
  EXPECT_GE(a.value.hi.get_d(), ref);
  MetricResult d = metric_d1(harmonic_pattern(1), TInfElem(), 1'000'000, Rat(5));
  EXPECT_EQ(d.kind, MetricResult::Kind::Diverges);
  EXPECT_GT(d.partial_lower, 5);
}

TEST(Metrics, D0BelowD1AndSymmetric) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 100; ++t) {
    std::map<long, CirclePoint> a, b;
    for (int i = 0; i < 4; ++i) {
      a[1 + static_cast<long>(rng() % 10)] = canonicalize(static_cast<long>(rng() % 12), 12);
      b[1 + static_cast<long>(rng() % 10)] = canonicalize(static_cast<long>(rng() % 12), 12);
    }
    MetricResult d0 = metric_d0(fin(a), fin(b)), d1 = metric_d1(fin(a), fin(b));
    MetricResult r0 = metric_d0(fin(b), fin(a));
    EXPECT_LE(d0.value.lo, d1.value.hi);
    EXPECT_EQ(d0.value.lo, r0.value.lo);
  }
}

TEST(PairZInf, Examples) {
  EXPECT_EQ(pair_zinf(ZInfElem::unit(1), fin({{1, q(1, 3)}})), q(1, 3));
  ZInfElem n = ZInfElem::unit(1, 2) + ZInfElem::unit(2, -1);
  EXPECT_EQ(pair_zinf(n, fin({{1, q(1, 4)}, {2, q(1, 2)}})), CirclePoint());
  EXPECT_EQ(pair_zinf(ZInfElem(), harmonic_pattern(3)), CirclePoint());
}

TEST(PairZInf, HarmonicBlockAgreesWithDirectSum) {
  TInfElem z = harmonic_pattern(10);
  for (long b : {5L, 50L, 500L}) {
    Rat s = 0;
    for (long k = 1; k <= b; ++k) s += make_rat(Int(1), Int(10 * k));
    CirclePoint p = pair_zinf(ZInfElem::indicator(1, b), z);
    EXPECT_EQ(p, CirclePoint::rational(frac(s)));
  }
  Interval big = pair_zinf_enclosure(ZInfElem::indicator(1, 1'000'000), z, 40);
  // H_n = ln n + gamma + 1/(2n) - ..., so sum = H_n / 10
  const double ref = (std::log(1e6) + 0.5772156649015329 + 5e-7) / 10;
  EXPECT_LE(big.lo.get_d(), ref + 1e-12);
  EXPECT_GE(big.hi.get_d(), ref - 1e-12);
}

TEST(FEps, Examples) {
  EXPECT_TRUE(f_eps_l_contains(ZInfElem(), Rat(1, 3), 5));
  EXPECT_TRUE(f_eps_l_contains(ZInfElem::unit(6), Rat(1), 5));
  EXPECT_FALSE(f_eps_l_contains(ZInfElem::unit(6, 2), Rat(1), 5));
  EXPECT_FALSE(f_eps_l_contains(ZInfElem::unit(5), Rat(1), 5)) << "support must lie beyond l";
}

TEST(Coefficients, Rules) {
  CoefficientAnalysis unit = exa1_coefficient_analysis(omega_unit());
  EXPECT_TRUE(is_in(unit.r1_divergent));
  ASSERT_TRUE(std::holds_alternative<Int>(unit.bound));
  EXPECT_EQ(std::get<Int>(unit.bound), 1);
  CoefficientAnalysis anchored = exa1_coefficient_analysis(omega_anchored());
  EXPECT_TRUE(is_not_in(anchored.r1_divergent));
  CoefficientAnalysis scaled = exa1_coefficient_analysis(omega_scaled(), 6);
  ASSERT_TRUE(std::holds_alternative<UnboundedWitness>(scaled.bound));
  const auto& w = std::get<UnboundedWitness>(scaled.bound);
  for (std::size_t j = 0; j < w.k.size(); ++j) {
    EXPECT_GT(w.d[j], Int((j + 1) * (j + 1)));
    if (j) EXPECT_GT(w.k[j], w.k[j - 1]);
  }
  CoefficientAnalysis pre = exa1_coefficient_analysis(omega_prefix({ZInfElem::unit(1)}));
  EXPECT_TRUE(is_unknown(pre.r1_divergent));
}

TEST(UnboundedWitness, ScaledRule) {
  std::vector<Index> ks;
  for (int j = 1; j <= 6; ++j) ks.push_back(Index((j + 1) * (j + 1)));
  UnboundedWitnessResult r = exa1_unbounded_witness(omega_scaled(), ks);
  EXPECT_TRUE(r.verified);
  for (const auto& p : r.pairings) EXPECT_EQ(p, q(1, 2));
  EXPECT_TRUE(is_in(r.z.l1_summable()));
  UnboundedWitnessResult one = exa1_unbounded_witness(omega_scaled(), {Index(4)});
  EXPECT_TRUE(one.z.is_finite());
  UnboundedWitnessResult none = exa1_unbounded_witness(omega_scaled(), {});
  EXPECT_TRUE(none.z.finite_entries().empty());
}

TEST(EscapeWitness, UnitRule) {
  EscapeWitness w = exa1_escape_witness(omega_unit(), 1, 30);
  EXPECT_TRUE(w.trace_ok);
  ASSERT_GE(w.values.size(), 2u);
  EXPECT_EQ(w.values[1], Rat(1, 2));
  EXPECT_EQ(w.z.at(w.positions[1]), q(1, 2));
  for (const auto& row : w.trace) {
    EXPECT_LE(row.norm, row.bound);
    EXPECT_LE(row.bound, make_rat(Int(2), Int(static_cast<long>(row.m))));
  }
  EXPECT_THROW(exa1_escape_witness(omega_scaled(), 1, 10), PreconditionViolation);
}

TEST(GClosure, Preconditions) {
  EXPECT_THROW(exa1_gclosure_blocks(fin({{1, q(1, 3)}}), 3), PreconditionViolation);
  GClosureResult proj = exa1_gclosure_blocks(constant_pattern(q(1, 2)), 4);
  EXPECT_TRUE(proj.projection_family);
  for (const auto& c : proj.chords) EXPECT_GT(c.lower(), 0);
}

TEST(GClosure, HarmonicBlocksSmall) {
  GClosureResult r = exa1_gclosure_blocks(harmonic_pattern(10, 101), 3, Index(100));
  ASSERT_EQ(r.partition.sums.size(), 3u);
  // first block recomputed with exact rationals
  Rat s = 0;
  for (Index k = r.partition.cutoffs[0] + 1; k <= r.partition.cutoffs[1]; ++k) s += Rat(1) / Rat(10 * k);
  EXPECT_GT(s, Rat(1, 3));
  EXPECT_LT(s, Rat(1, 2));
  EXPECT_TRUE(r.partition.sums[0].contains(s));
  for (const auto& c : r.chords) EXPECT_GE(c.lower(), Rat(17320, 10000));
}
