#include <gtest/gtest.h>

#include <random>
#include <set>

#include "charsub/graph.hpp"
#include "oracles.hpp"

using namespace charsub;

namespace {

CirclePoint q(long p, long d) { return CirclePoint::rational(make_rat(Int(p), Int(d))); }

FiniteEventuallyPeriodic finper(FinAbGroup g, std::vector<Coords> prefix, std::vector<Coords> period) {
  return std::get<FiniteEventuallyPeriodic>(validated(FiniteEventuallyPeriodic{g, prefix, period}));
}

std::set<Coords> as_set(const Subgroup& h) {
  auto e = h.elements();
  return {e.begin(), e.end()};
}

}  // namespace

TEST(GraphPoint, Traces) {
  FinAbGroup z4 = FinAbGroup::cyclic(4);
  auto u = finper(z4, {}, {{2}});
  for (const auto& t : graph_point(u, {0}, 5).trace) EXPECT_EQ(t, CirclePoint());
  for (const auto& t : graph_point(u, {1}, 5).trace) EXPECT_EQ(t, q(1, 2));
  GraphPoint g = graph_point(SeqSpec(Geometric{1, 2}), q(1, 3), 4);
  EXPECT_EQ(g.trace, (std::vector<CirclePoint>{q(2, 3), q(1, 3), q(2, 3), q(1, 3)}));
}

TEST(Li, Examples) {
  FinAbGroup z2 = FinAbGroup::cyclic(2), z4 = FinAbGroup::cyclic(4);
  EXPECT_EQ(li_subgroup(finper(z2, {}, {{1}}), 0).l, Subgroup::whole(z2));
  LiSubgroup a = li_subgroup(finper(z2, {}, {{1}}), 1);
  EXPECT_EQ(as_set(a.l), (std::set<Coords>{{0, 0}, {1, 1}}));
  LiSubgroup b = li_subgroup(finper(z4, {}, {{2}}), 1);
  EXPECT_EQ(b.l, Subgroup(b.product, {{1, 2}}));
}

TEST(Li, MatchesDirectImage) {
  std::mt19937_64 rng(4);
  for (const FinAbGroup& g : groups_up_to_order(12)) {
    if (g.order() == 1) continue;
    auto el = elements(g);
    for (int t = 0; t < 4; ++t) {
      std::vector<Coords> pre, per;
      for (std::size_t i = 0, n = rng() % 2; i < n; ++i) pre.push_back(el[rng() % el.size()].coords);
      for (std::size_t i = 0, n = 1 + rng() % 2; i < n; ++i) per.push_back(el[rng() % el.size()].coords);
      auto u = finper(g, pre, per);
      for (std::size_t depth = 1; depth <= 3; ++depth) {
        LiSubgroup li = li_subgroup(u, depth);
        std::set<Coords> img;
        for (const auto& x : el) {
          Coords row = x.coords;
          for (std::size_t k = 1; k <= depth; ++k) {
            std::int64_t num = oracle::pairing(g.factors(), eval_character(u, k), x.coords);
            row.push_back(num * li.modulus / g.exponent());
          }
          img.insert(row);
        }
        EXPECT_EQ(as_set(li.l), img);
      }
    }
  }
}

TEST(Separate, Examples) {
  FinAbGroup z2 = FinAbGroup::cyclic(2), z4 = FinAbGroup::cyclic(4);
  auto u2 = finper(z2, {}, {{1}});
  SeparatingCharacter s = separate_point(u2, {1}, {CirclePoint()});
  EXPECT_TRUE(s.verified);
  EXPECT_EQ(s.value, q(1, 2));
  EXPECT_THROW(separate_point(u2, {1}, {q(1, 2)}), PreconditionViolation);
  auto u4 = finper(z4, {}, {{2}});
  SeparatingCharacter t = separate_point(u4, {1}, {CirclePoint()});
  EXPECT_TRUE(t.verified);
  Subgroup perp = annihilator(li_subgroup(u4, 1, t.modulus).l);
  Coords full = t.base_char;
  full.push_back(t.tail.coeff(1).get_si());
  EXPECT_TRUE(perp.contains(full));
}

TEST(Separate, IrrationalClaimUsesFallback) {
  auto u = finper(FinAbGroup::cyclic(3), {}, {{1}});
  SeparatingCharacter s = separate_point(u, {1}, {CirclePoint::surd(0, 1, 2, 1)});
  EXPECT_TRUE(s.fallback);
  EXPECT_TRUE(verify_annihilates_graph(u, s));
  EXPECT_FALSE(separator_value(u, s, {1}, {CirclePoint::surd(0, 1, 2, 1)}) == CirclePoint());
}

TEST(Separate, RandomCasesAnnihilateGraphExhaustively) {
  std::mt19937_64 rng(12);
  int n = 0;
  for (const FinAbGroup& g : groups_up_to_order(16)) {
    auto el = elements(g);
    for (int t = 0; t < 5; ++t) {
      auto u = finper(g, {el[rng() % el.size()].coords}, {el[rng() % el.size()].coords});
      const Coords& x = el[rng() % el.size()].coords;
      const std::size_t depth = 1 + rng() % 3;
      std::vector<CirclePoint> claim = graph_point(u, x, depth).trace;
      const std::size_t bad = rng() % depth;
      claim[bad] = claim[bad] + q(1, static_cast<long>(g.exponent() * 2));
      SeparatingCharacter s = separate_point(u, x, claim);
      EXPECT_EQ(s.index, bad + 1) << "minimal disagreeing index";
      // every graph point, directly
      for (const auto& y : el)
        EXPECT_EQ(separator_value(u, s, y.coords, graph_point(u, y.coords, depth).trace), CirclePoint());
      EXPECT_FALSE(separator_value(u, s, x, claim) == CirclePoint());
      ++n;
    }
  }
  EXPECT_GT(n, 50);
}

TEST(LexMin, FindsSmallestWitness) {
  FinAbGroup g({2, 4});
  Subgroup h = Subgroup::whole(g);
  auto c = lex_min_outside_kernel(h, {1, 1}, 4);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (Coords{0, 1}));
  EXPECT_FALSE(lex_min_outside_kernel(Subgroup(g, {{0, 2}}), {0, 2}, 4).has_value());
}

TEST(GuPerp, Examples) {
  FinAbGroup z2 = FinAbGroup::cyclic(2);
  PerpReport r = gu_perp_generators(finper(z2, {{1}}, {{0}}), 3);
  ASSERT_EQ(r.generators.size(), 3u);
  EXPECT_EQ(r.generators[0].base_char, (Coords{1}));
  EXPECT_EQ(r.generators[1].base_char, (Coords{0}));
  EXPECT_TRUE(r.annihilates);
  EXPECT_TRUE(r.relation_holds);
  EXPECT_THROW(gu_perp_generators(finper(z2, {}, {{1}, {0}}), 3), PreconditionViolation);
  FinAbGroup z3 = FinAbGroup::cyclic(3);
  PerpReport triv = gu_perp_generators(finper(z3, {}, {{0}}), 2);
  for (const auto& g : triv.generators) EXPECT_EQ(g.base_char, (Coords{0}));
}

TEST(GuPerp, RelationSignMatters) {
  FinAbGroup z3 = FinAbGroup::cyclic(3);
  PerpReport r = gu_perp_generators(finper(z3, {{1}}, {{0}}), 2);
  EXPECT_TRUE(r.relation_holds);
  EXPECT_FALSE(r.plus_sign_holds) << "2 u_1 != 0 in Z3";
  EXPECT_TRUE(in_gu_perp(finper(z3, {{1}}, {{0}}), {2}, ZInfElem::unit(1)));
}

TEST(Closure, Examples) {
  FinAbGroup z4 = FinAbGroup::cyclic(4), z2 = FinAbGroup::cyclic(2);
  Closure c = restrict_to_closure(finper(z4, {}, {{2}}));
  EXPECT_EQ(as_set(c.y), (std::set<Coords>{{0}, {2}}));
  EXPECT_EQ(c.restricted.group, z2);
  EXPECT_EQ(su_finite(c.restricted.group, c.restricted), Subgroup::whole(c.restricted.group));
  Closure same = restrict_to_closure(finper(z4, {{1}}, {{0}}));
  EXPECT_EQ(same.y, Subgroup::whole(z4));
  EXPECT_EQ(restrict_to_closure(finper(z2, {}, {{1}})).y.order(), 1u);
}

TEST(Akm, Examples) {
  SeqSpec g3 = Geometric{1, 3};
  EXPECT_EQ(enumerate_akm(g3, 1, 0, 2), (std::set<Int>{-9, -3, -1, 1, 3, 9}));
  std::set<Int> zero = enumerate_akm(SeqSpec(LinearRecurrence{{0}, {0}}), 3, 0, 5);
  EXPECT_EQ(zero, (std::set<Int>{0}));
}

TEST(Akm, MatchesExhaustiveOracle) {
  std::vector<SeqSpec> seqs = {Geometric{1, 3}, Geometric{1, 2}, Factorial{1}, LinearRecurrence{{1, 1}, {1, 2}}};
  for (const auto& u : seqs)
    for (int k = 1; k <= 3; ++k)
      for (std::size_t m = 0; m <= 2; ++m) {
        std::vector<Int> terms;
        for (std::uint64_t i = 0; i <= 5; ++i) terms.push_back(eval_term(u, i));
        EXPECT_EQ(enumerate_akm(u, k, m, 5), oracle::akm(terms, k, m, 5)) << seq_str(u) << " k=" << k << " m=" << m;
      }
}

TEST(Akm, Monotone) {
  SeqSpec u = Geometric{1, 2};
  for (int k = 1; k < 4; ++k) {
    auto a = enumerate_akm(u, k, 1, 6), b = enumerate_akm(u, k + 1, 1, 6), c = enumerate_akm(u, k, 2, 6);
    for (const auto& v : a) EXPECT_TRUE(b.count(v));
    for (const auto& v : c) EXPECT_TRUE(a.count(v));
  }
}

TEST(AkmExhaustion, Examples) {
  SeqSpec g3 = Geometric{1, 3};
  EXPECT_EQ(akm_exhaustion(g3, {3, 9}, 5, 6).k, 1u);
  EXPECT_EQ(akm_exhaustion(g3, {4}, 5, 6).k, 2u);
  AkmCover z = akm_exhaustion(g3, {0}, 5, 6);
  EXPECT_TRUE(z.found);
  EXPECT_EQ(z.k, 1u);
  AkmCover miss = akm_exhaustion(g3, {1000}, 2, 3);
  EXPECT_FALSE(miss.found);
  EXPECT_EQ(miss.uncovered, Int(1000));
}

TEST(Neighborhood, Examples) {
  SeqSpec g3 = Geometric{1, 3};
  NeighborhoodResult a = neighborhood_member(g3, {0, 4}, 9 + 243);
  ASSERT_TRUE(is_in(a.verdict));
  EXPECT_TRUE(check_decomposition(g3, {0, 4}, 9 + 243, a.decomposition));
  NeighborhoodResult b = neighborhood_member(g3, {2, 3}, 1);
  ASSERT_TRUE(is_not_in(b.verdict));
  ASSERT_TRUE(b.certificate_modulus.has_value());
  EXPECT_EQ(*b.certificate_modulus, 9);
  EXPECT_TRUE(is_in(neighborhood_member(g3, {5, 6}, 0).verdict));
}

TEST(Neighborhood, ForwardSamplesAreRecovered) {
  std::mt19937_64 rng(21);
  SeqSpec u = Geometric{1, 2};
  for (int t = 0; t < 60; ++t) {
    std::vector<std::uint64_t> cutoffs = {rng() % 3, rng() % 4};
    Int y = 0;
    for (auto c : cutoffs) {
      const int sign = static_cast<int>(rng() % 3) - 1;
      y += sign * eval_term(u, c + rng() % 3);
    }
    NeighborhoodResult r = neighborhood_member(u, cutoffs, y, 6);
    ASSERT_TRUE(is_in(r.verdict)) << y;
    EXPECT_TRUE(check_decomposition(u, cutoffs, y, r.decomposition));
  }
}

TEST(Continuity, Examples) {
  ContinuityReport f = continuity_certificate(Factorial{1}, q(1, 6), Rat(1, 10));
  EXPECT_TRUE(is_in(f.membership));
  EXPECT_TRUE(f.all_below);
  ASSERT_FALSE(f.cutoffs.empty());
  EXPECT_LE(f.cutoffs.front(), 6u);
  for (std::size_t k = 0; k < f.cutoffs.size(); ++k) EXPECT_EQ(mod_floor(eval_term(Factorial{1}, f.cutoffs[k]), 6), 0);
  ContinuityReport z = continuity_certificate(Geometric{1, 2}, CirclePoint(), Rat(1, 10));
  EXPECT_TRUE(z.all_below);
  ContinuityReport g = continuity_certificate(Geometric{1, 2}, q(1, 3), Rat(1, 10));
  ASSERT_TRUE(is_not_in(g.membership));
  EXPECT_EQ(std::get<NotIn>(g.membership).delta, Rat(1, 3));
}
