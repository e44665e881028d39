#include <gtest/gtest.h>

#include <random>

#include "charsub/diophantine.hpp"
#include "oracles.hpp"

using namespace charsub;

namespace {

CirclePoint q(long p, long d) { return CirclePoint::rational(make_rat(Int(p), Int(d))); }
CirclePoint root(long d) { return CirclePoint::surd(0, 1, d, 1); }

CirclePoint combine(const IntVector& n, const std::vector<CirclePoint>& xs) {
  CirclePoint s;
  for (std::size_t i = 0; i < n.size(); ++i) s = s + pair(n[i], xs[i]);
  return s;
}

}  // namespace

TEST(Lattice, KernelAndLll) {
  IntMatrix m = {{1, 2, 3}};
  auto k = integer_kernel(m, 3);
  ASSERT_EQ(k.size(), 2u);
  for (const auto& v : k) EXPECT_EQ(dot(m[0], v), 0);
  auto red = lll_reduce({{1, 1, 1}, {-1, 0, 2}, {3, 5, 6}});
  EXPECT_EQ(red.size(), 3u);
  for (const auto& v : red) EXPECT_LE(linf_norm(v), 3);
}

TEST(Relation, Examples) {
  RelationResult a = integer_relation({root(2), root(8)}, 1000);
  ASSERT_EQ(a.kind, RelationResult::Kind::Found);
  EXPECT_EQ(a.relation->coefficients, (IntVector{2, -1}));
  EXPECT_TRUE(a.relation->exact_zero);
  RelationResult b = integer_relation({q(1, 3), q(1, 6)}, 1000);
  ASSERT_EQ(b.kind, RelationResult::Kind::Found);
  EXPECT_EQ(b.relation->coefficients, (IntVector{1, -2}));
  RelationResult c = integer_relation({root(2), root(3)}, 1000);
  EXPECT_EQ(c.kind, RelationResult::Kind::NoneFound);
}

TEST(Relation, AgreesWithExhaustiveScan) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    std::vector<CirclePoint> xs;
    const std::size_t m = 1 + rng() % 3;
    for (std::size_t i = 0; i < m; ++i) {
      if (rng() % 3 == 0) {
        xs.push_back(CirclePoint::surd(static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 3),
                                       rng() % 2 ? 2 : 3, 1 + static_cast<long>(rng() % 4)));
      } else {
        xs.push_back(canonicalize(static_cast<long>(rng() % 40), 1 + static_cast<long>(rng() % 40)));
      }
    }
    const long h = 6;
    RelationResult r = integer_relation(xs, h);
    auto scan = relation_scan(xs, h);
    ASSERT_EQ(r.kind == RelationResult::Kind::Found, scan.has_value()) << t;
    if (scan) {
      EXPECT_EQ(combine(*scan, xs), CirclePoint());
      EXPECT_EQ(combine(r.relation->coefficients, xs), CirclePoint());
      EXPECT_LE(linf_norm(r.relation->coefficients), h);
    }
  }
}

TEST(Relation, TorsionOnly) {
  RelationResult r = integer_relation({q(1, 2)}, 10);
  ASSERT_EQ(r.kind, RelationResult::Kind::Found);
  EXPECT_EQ(r.relation->coefficients, (IntVector{2}));
  EXPECT_TRUE(r.relation->torsion_only);
}

TEST(Kronecker, SqrtTwoMatchesConvergentOracle) {
  KroneckerResult r = kronecker_char_search({root(2)}, {CirclePoint()}, Rat(1, 100), 100);
  ASSERT_TRUE(r.solution.has_value());
  long best = 0;
  for (long n = 1; n <= 100 && !best; ++n)
    if (oracle::dist_surd(n, 2, 0) < 0.01L) best = n;
  EXPECT_EQ(r.solution->n, best);
  EXPECT_TRUE(r.reverified);
}

TEST(Kronecker, DependentInputReportsRelation) {
  KroneckerResult r = kronecker_char_search({q(1, 2)}, {q(1, 4)}, Rat(1, 10), 100);
  ASSERT_TRUE(r.dependency.has_value());
  EXPECT_EQ(r.dependency->relation->coefficients, (IntVector{2}));
}

TEST(Kronecker, TwoSurdsMatchesLongDoubleScan) {
  KroneckerResult r = kronecker_char_search({root(2), root(3)}, {q(1, 2), q(1, 2)}, Rat(1, 20), 1'000'000);
  ASSERT_TRUE(r.solution.has_value());
  long ref = 0;
  for (long n = 1; n <= 1'000'000 && !ref; ++n)
    if (oracle::dist_surd(n, 2, 0.5L) < 0.05L && oracle::dist_surd(n, 3, 0.5L) < 0.05L) ref = n;
  EXPECT_EQ(r.solution->n, ref);
  EXPECT_TRUE(verify_kronecker({root(2), root(3)}, {q(1, 2), q(1, 2)}, Rat(1, 20), r.solution->n, 128));
}

TEST(WordCheck, Examples) {
  EXPECT_EQ(l1_ball_count(1, 3), 7u);
  EXPECT_EQ(l1_ball_count(2, 1), 5u);
  WordCheckReport one = l1_word_check(1, 3);
  EXPECT_TRUE(one.passed);
  EXPECT_EQ(one.violations, 0u);
  for (std::uint64_t r = 1; r <= 4; ++r) EXPECT_TRUE(l1_word_check(r, 1).passed);
}

TEST(WordCheck, CountsMatchClosedForm) {
  for (std::uint64_t r = 0; r <= 4; ++r)
    for (std::uint64_t n = 0; n <= 6; ++n) {
      EXPECT_EQ(delannoy_count(r, n), oracle::cross_polytope_count(r, n));
      EXPECT_EQ(l1_ball_count(r, n), oracle::cross_polytope_count(r, n));
    }
}
