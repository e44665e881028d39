#include <gtest/gtest.h>

#include <random>
#include <set>

#include "charsub/finite_abelian.hpp"
#include "oracles.hpp"

using namespace charsub;

namespace {

std::set<Coords> as_set(const Subgroup& h) {
  auto e = h.elements();
  return {e.begin(), e.end()};
}

}  // namespace

TEST(Smith, Examples) {
  SmithForm id = smith_normal_form({{1, 0}, {0, 1}});
  EXPECT_EQ(id.s, identity_matrix(2));
  SmithForm s = smith_normal_form({{2, 4}, {6, 8}});
  EXPECT_EQ(s.s[0][0], 2);
  EXPECT_EQ(s.s[1][1], 4);
  SmithForm z = smith_normal_form({{0, 0}, {0, 0}});
  EXPECT_EQ(z.s[0][0], 0);
  EXPECT_EQ(z.s[1][1], 0);
}

TEST(Smith, MatchesDeterminantalDivisorsAndFactorizes) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 1 + rng() % 3, c = 1 + rng() % 3;
    IntMatrix m(r, std::vector<Int>(c));
    for (auto& row : m)
      for (auto& v : row) v = static_cast<long>(rng() % 21) - 10;
    SmithForm s = smith_normal_form(m);
    EXPECT_EQ(multiply(multiply(s.u, m), s.v), s.s);
    EXPECT_EQ(multiply(s.v, s.v_inv), identity_matrix(c));
    EXPECT_EQ(abs(determinant(s.u)), 1);
    auto diag = oracle::smith_diagonal(m);
    for (std::size_t i = 0; i < diag.size(); ++i) EXPECT_EQ(s.s[i][i], diag[i]) << "case " << t << " entry " << i;
  }
}

TEST(Group, AxiomsHold) {
  for (const FinAbGroup& g : groups_up_to_order(24)) {
    auto el = elements(g);
    ASSERT_EQ(el.size(), g.order());
    std::mt19937_64 rng(g.order());
    for (int t = 0; t < 50; ++t) {
      const Coords& a = el[rng() % el.size()].coords;
      const Coords& b = el[rng() % el.size()].coords;
      const Coords& c = el[rng() % el.size()].coords;
      EXPECT_EQ(g.add(a, b), g.add(b, a));
      EXPECT_EQ(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
      EXPECT_EQ(g.add(a, g.neg(a)), g.zero());
      EXPECT_EQ(g.add(a, g.zero()), a);
    }
  }
}

TEST(Pairing, Examples) {
  EXPECT_EQ(dual_pair_finite(FinAbGroup::cyclic(6), {{3}}, {{2}}), CirclePoint());
  EXPECT_EQ(dual_pair_finite(FinAbGroup::cyclic(4), {{1}}, {{1}}), CirclePoint::rational(Rat(1, 4)));
  EXPECT_EQ(dual_pair_finite(FinAbGroup({2, 4}), {{1, 1}}, {{1, 2}}), CirclePoint());
}

TEST(Pairing, BilinearAndNondegenerate) {
  for (const FinAbGroup& g : groups_up_to_order(16)) {
    auto el = elements(g);
    for (const auto& chi : el) {
      bool trivial = true;
      for (const auto& x : el) {
        trivial = trivial && pair_numerator(g, chi.coords, x.coords) == 0;
        for (const auto& y : {el.front(), el.back()}) {
          const Character c{chi.coords};
          EXPECT_EQ(dual_pair_finite(g, c, {g.add(x.coords, y.coords)}),
                    dual_pair_finite(g, c, x) + dual_pair_finite(g, c, y));
        }
      }
      EXPECT_EQ(trivial, chi.coords == g.zero());
    }
  }
}

TEST(Elements, Examples) {
  EXPECT_EQ(elements(FinAbGroup()).size(), 1u);
  EXPECT_EQ(elements(FinAbGroup::cyclic(3)).size(), 3u);
  EXPECT_EQ(elements(FinAbGroup({2, 2})).size(), 4u);
  EXPECT_THROW(FinAbGroup({2, 3}), InvalidArgument);
}

TEST(Annihilator, Examples) {
  FinAbGroup z4 = FinAbGroup::cyclic(4);
  EXPECT_EQ(as_set(annihilator(Subgroup(z4, {{2}}))), (std::set<Coords>{{0}, {2}}));
  EXPECT_EQ(annihilator(Subgroup::whole(z4)).order(), 1u);
  EXPECT_EQ(annihilator(Subgroup::trivial(z4)), Subgroup::whole(z4));
}

TEST(Annihilator, MatchesExhaustiveScanAndDualityLaws) {
  for (const FinAbGroup& g : groups_up_to_order(32)) {
    for (const Subgroup& h : all_subgroups(g)) {
      Subgroup a = annihilator(h);
      std::set<std::vector<std::int64_t>> hs;
      for (const auto& e : h.elements()) hs.insert(e);
      auto ref = oracle::annihilator(g.factors(), hs);
      EXPECT_EQ(as_set(a), (std::set<Coords>(ref.begin(), ref.end()))) << g.str() << " " << h.str();
      EXPECT_EQ(annihilator(a), h);
      EXPECT_EQ(h.order() * a.order(), g.order());
    }
  }
}

TEST(Subgroup, MatchesClosureOracle) {
  std::mt19937_64 rng(23);
  for (const FinAbGroup& g : groups_up_to_order(36)) {
    auto el = elements(g);
    for (int t = 0; t < 6; ++t) {
      std::vector<Coords> gens;
      for (std::size_t k = 0, n = rng() % 3; k < n; ++k) gens.push_back(el[rng() % el.size()].coords);
      Subgroup h(g, gens);
      auto ref = oracle::span(g.factors(), gens);
      EXPECT_EQ(as_set(h), (std::set<Coords>(ref.begin(), ref.end())));
      for (const auto& x : el) EXPECT_EQ(h.contains(x.coords), ref.count(x.coords) == 1);
    }
  }
}

TEST(Subgroup, LatticeOperations) {
  for (const FinAbGroup& g : groups_up_to_order(16)) {
    auto subs = all_subgroups(g);
    for (const auto& a : subs)
      for (const auto& b : subs) {
        Subgroup j = a.join(b), m = a.meet(b);
        EXPECT_TRUE(a.is_subgroup_of(j));
        EXPECT_TRUE(m.is_subgroup_of(b));
        EXPECT_EQ(j.order() * m.order(), a.order() * b.order());
        EXPECT_EQ(annihilator(j), annihilator(a).meet(annihilator(b)));
      }
  }
}

TEST(Quotient, Examples) {
  FinAbGroup z4 = FinAbGroup::cyclic(4);
  EXPECT_EQ(quotient_by(z4, Subgroup(z4, {{2}})).group, FinAbGroup::cyclic(2));
  FinAbGroup g({2, 4});
  EXPECT_EQ(quotient_by(g, Subgroup(g, {{1, 2}})).group, FinAbGroup::cyclic(4));
  EXPECT_EQ(quotient_by(g, Subgroup::trivial(g)).group, g);
}

TEST(Quotient, MatchesCosetOracle) {
  for (const FinAbGroup& g : groups_up_to_order(32)) {
    for (const Subgroup& h : all_subgroups(g)) {
      Quotient q = quotient_by(g, h);
      std::set<std::vector<std::int64_t>> hs;
      for (const auto& e : h.elements()) hs.insert(e);
      EXPECT_EQ(oracle::order_profile(q.group.factors()), oracle::quotient_order_profile(g.factors(), hs));
      for_each_element(g, [&](const Coords& x) {
        EXPECT_EQ(q.projection.apply(x) == q.group.zero(), h.contains(x));
      });
    }
  }
}

TEST(Abstract, EmbeddingIsInjectiveOntoSubgroup) {
  for (const FinAbGroup& g : groups_up_to_order(24)) {
    for (const Subgroup& h : all_subgroups(g)) {
      auto ab = h.as_abstract();
      std::set<Coords> img;
      for_each_element(ab.group, [&](const Coords& x) { img.insert(ab.embedding.apply(x)); });
      EXPECT_EQ(img, as_set(h));
    }
  }
}

TEST(ParseGroup, Forms) {
  EXPECT_EQ(parse_group("Z4 x Z8"), FinAbGroup({4, 8}));
  EXPECT_EQ(parse_group("Z2xZ6"), FinAbGroup({2, 6}));
  EXPECT_EQ(parse_group("trivial"), FinAbGroup());
  EXPECT_THROW(parse_group("Z4 x Z6"), InvalidArgument);
  EXPECT_THROW(parse_group("Q8"), InvalidArgument);
}
