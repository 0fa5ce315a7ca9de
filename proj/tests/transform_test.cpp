#include <random>

#include <gtest/gtest.h>

#include "msa/transform.hpp"

namespace msa {
namespace {

using FT = FiniteTransformation;

FT random_transformation(std::mt19937_64& rng, Index window) {
  std::map<Index, Index> m;
  for (Index i = 0; i < window; ++i) {
    if (rng() % 3 == 0) m[i] = static_cast<Index>(rng() % static_cast<std::uint64_t>(window));
  }
  return FT(m);
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose(FT(), FT::replacement(1, 3)), FT::replacement(1, 3));
  FT r = compose(FT::replacement(0, 1), FT::replacement(1, 0));
  EXPECT_EQ(r(0), 1);
  EXPECT_EQ(r(1), 1);
  EXPECT_EQ(r.support(), (IndexSet{0}));
  EXPECT_TRUE(compose(FT::transposition(2, 5), FT::transposition(2, 5)).is_identity());
}

TEST(Update, Examples) {
  EXPECT_EQ(update(FT(), 2, 5), FT::replacement(2, 5));
  EXPECT_TRUE(update(FT::replacement(2, 5), 2, 2).is_identity());
  EXPECT_EQ(update(FT::replacement(0, 1), 1, 0), FT::transposition(0, 1));
}

TEST(Compose, AssociativeAndSupportBound) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 1000; ++n) {
    FT a = random_transformation(rng, 16);
    FT b = random_transformation(rng, 16);
    FT c = random_transformation(rng, 16);
    EXPECT_EQ(compose(a, compose(b, c)), compose(compose(a, b), c));
    IndexSet bound = a.support();
    for (Index i : b.support()) bound.insert(i);
    for (Index i : compose(a, b).support()) EXPECT_TRUE(bound.count(i));
    for (Index i = 0; i < 16; ++i) EXPECT_EQ(compose(a, b)(i), a(b(i)));
  }
}

TEST(Transformation, JsonRoundTrip) {
  FT t(std::map<Index, Index>{{0, 3}, {2, 1}});
  EXPECT_EQ(to_json(t), R"({"map":[[0,3],[2,1]]})");
  EXPECT_EQ(transformation_from_json(to_json(t)), t);
  EXPECT_THROW(transformation_from_json("{\"map\": [[0]]}"), Error);
}

TEST(Decompose, Replacement) {
  SubstChain c = decompose_s_tau(FT::replacement(0, 1), {0, 1});
  EXPECT_EQ(c, (SubstChain{{2, 1}, {0, 2}}));
}

TEST(Decompose, Identity) { EXPECT_TRUE(decompose_s_tau(FT(), {0, 1}).empty()); }

TEST(Decompose, Swap) {
  SubstChain c = decompose_s_tau(FT::transposition(0, 1), {0, 1});
  EXPECT_EQ(c, (SubstChain{{2, 1}, {3, 0}, {0, 2}, {1, 3}}));
  FT act = chain_action(c).restricted({0, 1});
  EXPECT_EQ(act, FT::transposition(0, 1));
}

TEST(Decompose, ActionEqualsTauOnUnblocked) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 300; ++n) {
    FT tau = random_transformation(rng, 6);
    IndexSet blocked{0, 1, 2, 3, 4, 5};
    FT act = chain_action(decompose_s_tau(tau, blocked)).restricted(blocked);
    EXPECT_EQ(act, tau);
  }
}

TEST(ChainFor, HasRequestedAction) {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 300; ++n) {
    FT tau = random_transformation(rng, 6);
    IndexSet keep{0, 1, 2, 3, 4, 5};
    SubstChain c = chain_for(tau, keep);
    EXPECT_EQ(chain_action(c).restricted(keep), tau);
    EXPECT_LE(c.size(), 2 * tau.support().size());
  }
}

TEST(ShiftMap, Basics) {
  ShiftMap s = ShiftMap::suc();
  ShiftMap p = ShiftMap::pred();
  EXPECT_EQ(s(3), 4);
  EXPECT_EQ(p(0), 0);
  EXPECT_EQ(p(5), 4);
  EXPECT_EQ(compose(p, s), ShiftMap::identity());
  EXPECT_EQ(s.missing_from_range(), (std::vector<long>{0}));
  EXPECT_EQ(compose(s, p).support(), (std::vector<long>{0}));
  EXPECT_EQ(ShiftMap::rep(1, 1), ShiftMap::identity());
  EXPECT_EQ(compose(ShiftMap::swap(0, 2), ShiftMap::swap(0, 2)), ShiftMap::identity());
}

TEST(StrongRichness, SucPred) {
  StrongRichnessReport r = strongly_rich_check({"suc"}, {"pred"}, 5, 16);
  EXPECT_TRUE(r.all_pass);
  ASSERT_EQ(r.rows.size(), 6u);
  for (const auto& row : r.rows) {
    std::vector<long> expect;
    for (long i = 0; i < row.n; ++i) expect.push_back(i);
    EXPECT_EQ(row.support, expect) << row.n;
  }
}

TEST(StrongRichness, IdentityPair) {
  StrongRichnessReport r = strongly_rich_check({"id"}, {"id"}, 4, 8);
  EXPECT_TRUE(r.all_pass);
  for (const auto& row : r.rows) EXPECT_TRUE(row.support.empty());
}

TEST(StrongRichness, SucSucFails) {
  StrongRichnessReport r = strongly_rich_check({"suc"}, {"suc"}, 1, 8);
  EXPECT_FALSE(r.all_pass);
  EXPECT_EQ(r.rows[1].verdict, Verdict::Fail);
}

TEST(Richness, IdentityFailsCondition2) {
  SemigroupSpec spec = parse_semigroup_spec("id\nwindow 4\ndepth 2\n");
  RichnessReport r = rich_check(spec);
  EXPECT_EQ(r.conditions[1].verdict, Verdict::Fail);
}

TEST(Richness, SucAloneFailsCondition2) {
  RichnessReport r = rich_check(parse_semigroup_spec("suc\nwindow 8\ndepth 4\n"));
  EXPECT_EQ(r.conditions[1].verdict, Verdict::Fail);
  EXPECT_NE(r.conditions[1].detail.find("within bound"), std::string::npos);
}

TEST(Richness, ReplacementsWithSucPred) {
  RichnessReport r = rich_check(parse_semigroup_spec("rep-all 4\nsuc\npred\nwindow 8\ndepth 3\n"));
  EXPECT_EQ(r.conditions[1].verdict, Verdict::Pass);
  EXPECT_NE(r.conditions[2].verdict, Verdict::Fail);
  EXPECT_NE(r.conditions[0].verdict, Verdict::Fail);
}

TEST(Richness, WindowTooSmall) {
  EXPECT_THROW(rich_check(parse_semigroup_spec("rep 3 9\nwindow 4\n")), Error);
}

}  // namespace
}  // namespace msa
