#include <algorithm>

#include <gtest/gtest.h>

#include "json.hpp"
#include "msa/saturate.hpp"

namespace msa {
namespace {

SaturationConfig config(const Logic& l, const std::string& sig_text = "p:\nq:\nr:\n") {
  SaturationConfig cfg;
  cfg.logic = l;
  cfg.sig = parse_signature(sig_text);
  return cfg;
}

std::size_t size(const Term& t) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < t.arity(); ++k) n += size(t.arg(k));
  return n;
}

Term dia_p() { return dia(gen("p")); }

bool contains(const std::vector<Term>& v, const Term& t) { return std::find(v.begin(), v.end(), t) != v.end(); }

std::vector<SeedPair> seeds() { return load_seed_pairs_file(std::string(MSA_DATA_DIR) + "/saturation_seeds.json"); }

TEST(Separable, SharedAtom) {
  auto s = separable({land(gen("p"), gen("q"))}, {lor(gen("p"), gen("r"))}, {"p"}, config(Logic::K()));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->witness, gen("p"));
}

TEST(Separable, NoCommonVocabulary) {
  auto cfg = config(Logic::K());
  cfg.depth = 2;
  EXPECT_FALSE(separable({gen("p")}, {gen("q")}, {}, cfg));
  EXPECT_FALSE(separable({gen("p")}, {gen("q")}, {}, cfg, false));
}

TEST(Separable, SameAtom) {
  auto s = separable({gen("p")}, {gen("p")}, {"p"}, config(Logic::K()));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->witness, gen("p"));
}

TEST(Separable, InterpolantRoute) {
  auto s = separable({box(land(gen("p"), gen("q")))}, {box(gen("p"))}, {"p"}, config(Logic::K()), false);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->method, "interpolant");
  EXPECT_EQ(s->witness, box(gen("p")));
}

TEST(Enumerate, SizeOrderedAndBounded) {
  Signature sig = parse_signature("p: 0\n");
  EXPECT_LE(enumerate_terms({"p"}, {0, 1}, 2, sig, 500).size(), 500u);
  auto ts = enumerate_terms({"p"}, {0, 1}, 2, sig, 30);
  EXPECT_EQ(ts.size(), 30u);
  EXPECT_TRUE(std::is_sorted(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return size(a) < size(b); }));
  EXPECT_EQ(ts[0], zero());
  EXPECT_TRUE(contains(ts, cyl(0, gen("p"))));
  EXPECT_TRUE(contains(ts, subst(0, 1, gen("p"))));
  for (const Term& t : ts) EXPECT_EQ(generators(t).count("q"), 0u);
}

TEST(Saturate, CylGetsFreshWitness) {
  auto cfg = config(Logic::K(), "p: 0\nq:\n");
  IndexSupply supply;
  TheoryPair pair = saturate({cyl(0, gen("p"))}, {gen("q")}, {"p"}, {"q"}, cfg, supply);
  ASSERT_TRUE(contains(pair.theory, cyl(0, gen("p"))));
  auto it = std::find_if(pair.log.begin(), pair.log.end(),
                         [](const TraceEntry& e) { return e.term == cyl(0, gen("p")) && e.side == 'T'; });
  ASSERT_NE(it, pair.log.end());
  EXPECT_EQ(it->action, "add-witness");
  ASSERT_TRUE(it->witness_index);
  const Index i = *it->witness_index;
  EXPECT_NE(i, 0);
  EXPECT_TRUE(contains(pair.theory, subst(0, i, gen("p"))));
  EXPECT_GT(pair.dilation_level, i);
}

TEST(Saturate, SeparableInputRejected) {
  IndexSupply supply;
  EXPECT_THROW(saturate({gen("p")}, {gen("p")}, {"p"}, {"p"}, config(Logic::K()), supply), SeparableInput);
}

TEST(Saturate, DiaPVersusP) {
  auto cfg = config(Logic::K());
  IndexSupply supply;
  TheoryPair pair = saturate({dia_p()}, {gen("p")}, {"p"}, {"p"}, cfg, supply);
  EXPECT_FALSE(contains(pair.theory, gen("p")));
  EXPECT_FALSE(pair.in_theory(gen("p"), cfg));
  EXPECT_TRUE(pair.in_theory(dia_p(), cfg));
  EXPECT_FALSE(pair.log.empty());
}

TEST(Saturate, TraceJson) {
  auto cfg = config(Logic::K());
  IndexSupply supply;
  TheoryPair pair = saturate({dia_p()}, {gen("p")}, {"p"}, {"p"}, cfg, supply);
  auto doc = nlohmann::json::parse(trace_to_json(pair));
  EXPECT_EQ(doc["trace"].size(), pair.log.size());
  EXPECT_EQ(doc["theory"][0], print(dia_p()));
}

TEST(CheckSaturated, DiaPTraceUniverse) {
  auto cfg = config(Logic::K());
  IndexSupply supply;
  TheoryPair pair = saturate({dia_p()}, {gen("p")}, {"p"}, {"p"}, cfg, supply);
  SaturationReport r = check_saturated(pair, trace_universe(pair), {"p"}, {"p"}, cfg);
  EXPECT_TRUE(r.pass(2));
  EXPECT_TRUE(r.pass(3));
  EXPECT_TRUE(r.pass(4));
  EXPECT_TRUE(r.all());
}

TEST(CheckSaturated, OverlapFailsTwo) {
  auto cfg = config(Logic::K());
  TheoryPair pair;
  pair.theory = {gen("p")};
  pair.cotheory = {gen("p")};
  EXPECT_FALSE(check_saturated(pair, {gen("p")}, {"p"}, {"p"}, cfg).pass(2));
}

TEST(CheckSaturated, DisjunctionFailsThree) {
  auto cfg = config(Logic::K());
  TheoryPair pair;
  pair.theory = {lor(gen("p"), gen("q"))};
  pair.cotheory = {gen("r")};
  auto r = check_saturated(pair, {lor(gen("p"), gen("q")), gen("p"), gen("q")}, {"p", "q"}, {"r"}, cfg);
  EXPECT_TRUE(r.pass(2));
  EXPECT_FALSE(r.pass(3));
  EXPECT_FALSE(r.all());
}

TEST(CheckSaturated, UnwitnessedCylFailsFour) {
  auto cfg = config(Logic::K(), "p: 0\nq:\n");
  TheoryPair pair;
  pair.theory = {cyl(0, gen("p"))};
  pair.cotheory = {gen("q")};
  EXPECT_FALSE(check_saturated(pair, {cyl(0, gen("p"))}, {"p"}, {"q"}, cfg).pass(4));
}

TEST(ModalWitness, DiaAndBoxInTheory) {
  auto cfg = config(Logic::K());
  TheoryPair pair;
  pair.theory = {dia_p(), box(gen("q"))};
  IndexSupply supply;
  auto kids = modal_witness_step(pair, {"p", "q"}, {"p", "q"}, cfg, supply);
  ASSERT_EQ(kids.size(), 1u);
  EXPECT_EQ(kids[0].start_theory, (std::vector<Term>{gen("p"), gen("q")}));
  EXPECT_TRUE(kids[0].claim_holds);
  ASSERT_TRUE(kids[0].pair);
}

TEST(ModalWitness, DiaInCotheory) {
  auto cfg = config(Logic::K());
  TheoryPair pair;
  pair.theory = {dia_p()};
  pair.cotheory = {dia(gen("r"))};
  IndexSupply supply;
  auto kids = modal_witness_step(pair, {"p", "r"}, {"p", "r"}, cfg, supply);
  ASSERT_EQ(kids.size(), 1u);
  EXPECT_EQ(kids[0].start_cotheory, std::vector<Term>{gen("r")});
}

TEST(ModalWitness, NoModalFormulas) {
  TheoryPair pair;
  pair.theory = {gen("p")};
  pair.cotheory = {gen("q")};
  IndexSupply supply;
  EXPECT_TRUE(modal_witness_step(pair, {"p"}, {"q"}, config(Logic::K()), supply).empty());
}

TEST(ModalWitness, ClaimViolationReported) {
  TheoryPair pair;
  pair.theory = {dia_p()};
  pair.cotheory = {dia(gen("p"))};
  IndexSupply supply;
  auto kids = modal_witness_step(pair, {"p"}, {"p"}, config(Logic::K()), supply);
  ASSERT_EQ(kids.size(), 1u);
  EXPECT_FALSE(kids[0].claim_holds);
  EXPECT_FALSE(kids[0].pair);
}

TEST(Countermodel, DiaPVersusP) {
  auto cfg = config(Logic::K());
  IndexSupply supply;
  Countermodel cm = build_countermodel({dia_p()}, {gen("p")}, {"p"}, {"p"}, cfg, supply);
  ASSERT_TRUE(cm.pass);
  ASSERT_EQ(cm.system.worlds.size(), 2u);
  EXPECT_TRUE(cm.system.access[0][1]);
  const AlgebraElement& p = cm.valuation.at("p");
  EXPECT_FALSE(p.at(0, 0));
  EXPECT_TRUE(p.at(1, 0));
  EXPECT_TRUE(eval(dia_p(), cm.system, cm.valuation, cm.width).at(0, 0));
}

TEST(Countermodel, CylPVersusP) {
  auto cfg = config(Logic::K(), "p: 0\n");
  IndexSupply supply;
  Countermodel cm = build_countermodel({cyl(0, gen("p"))}, {gen("p")}, {"p"}, {"p"}, cfg, supply);
  ASSERT_TRUE(cm.pass);
  ASSERT_EQ(cm.system.world_domain[0].size(), 2u);
  const SpacePtr& space = cm.valuation.begin()->second.space();
  const AlgebraElement& p = cm.valuation.at("p");
  int true_at = -1;
  for (int d = 0; d < 2; ++d) {
    if (p.at(0, space->encode({d}))) true_at = d;
  }
  ASSERT_GE(true_at, 0);
  ASSERT_EQ(cm.tuple.size(), 1u);
  EXPECT_NE(cm.tuple[0], true_at);
  EXPECT_FALSE(p.at(0, space->encode(cm.tuple)));
}

TEST(Countermodel, IndependentAtoms) {
  auto cfg = config(Logic::K());
  IndexSupply supply;
  Countermodel cm = build_countermodel({gen("p")}, {gen("q")}, {"p"}, {"q"}, cfg, supply);
  ASSERT_TRUE(cm.pass);
  EXPECT_EQ(cm.system.worlds.size(), 1u);
  EXPECT_TRUE(cm.valuation.at("p").at(0, 0));
  EXPECT_FALSE(cm.valuation.at("q").at(0, 0));
}

TEST(Countermodel, SeparableInputRejected) {
  IndexSupply supply;
  EXPECT_THROW(build_countermodel({box(gen("p"))}, {gen("p")}, {"p"}, {"p"}, config(Logic::T()), supply),
               SeparableInput);
}

TEST(Seeds, BadInput) {
  EXPECT_THROW(load_seed_pairs("[1"), Error);
  EXPECT_THROW(load_seed_pairs(R"j({"signature": "p:", "seeds": [{"logic": "K", "gamma": ["(g p)"]}]})j"), Error);
}

class SeedRun : public ::testing::TestWithParam<std::size_t> {};

// Inseparability replay, conditions (1)-(6) and witness freshness.
TEST_P(SeedRun, SaturationInvariants) {
  const SeedPair s = seeds().at(GetParam());
  SaturationConfig cfg;
  cfg.logic = s.logic;
  cfg.sig = s.sig;
  IndexSupply supply;
  TheoryPair pair = saturate(s.gamma, s.delta, s.x1, s.x2, cfg, supply);
  std::set<std::string> common;
  for (const auto& g : s.x1) {
    if (s.x2.count(g)) common.insert(g);
  }
  std::vector<Term> t = s.gamma, f = s.delta;
  IndexSet earlier;
  for (const Term& x : t) earlier.merge(mentioned_indices(x));
  for (const Term& x : f) earlier.merge(mentioned_indices(x));
  for (const TraceEntry& e : pair.log) {
    earlier.merge(mentioned_indices(e.term));
    if (e.action == "skip-separable") continue;
    std::vector<Term>& side = e.side == 'T' ? t : f;
    if (!contains(side, e.term)) side.push_back(e.term);
    if (e.witness) {
      ASSERT_TRUE(e.witness_index);
      EXPECT_EQ(earlier.count(*e.witness_index), 0u) << s.name << " step " << e.step;
      earlier.insert(*e.witness_index);
      side.push_back(*e.witness);
    }
    EXPECT_FALSE(separable(t, f, common, cfg)) << s.name << " step " << e.step;
  }
  EXPECT_EQ(t, pair.theory);
  EXPECT_EQ(f, pair.cotheory);
  SaturationReport r = check_saturated(pair, trace_universe(pair), s.x1, s.x2, cfg);
  for (const auto& c : r.conditions) EXPECT_TRUE(c.pass) << s.name << " condition " << c.condition << ": " << c.detail;
}

TEST_P(SeedRun, CountermodelReport) {
  const SeedPair s = seeds().at(GetParam());
  SaturationConfig cfg;
  cfg.logic = s.logic;
  cfg.sig = s.sig;
  IndexSupply supply;
  Countermodel cm = build_countermodel(s.gamma, s.delta, s.x1, s.x2, cfg, supply);
  EXPECT_TRUE(cm.pass) << s.name;
  EXPECT_TRUE(validate_system(cm.system).empty()) << s.name;
  EXPECT_TRUE(frame_has(cm.system.access, s.logic.flags())) << s.name;
  const SpacePtr& space = cm.valuation.begin()->second.space();
  const std::size_t x = space->encode(cm.tuple);
  for (const Term& g : s.gamma) EXPECT_TRUE(eval(g, space, cm.valuation).at(cm.world, x)) << s.name;
  for (const Term& d : s.delta) EXPECT_FALSE(eval(d, space, cm.valuation).at(cm.world, x)) << s.name;
  ASSERT_EQ(cm.worlds.size(), cm.system.worlds.size());
  for (std::size_t u = 0; u < cm.worlds.size(); ++u) {
    for (std::size_t v = 0; v < cm.worlds.size(); ++v) {
      if (cm.system.access[u][v]) EXPECT_LE(cm.worlds[u].dilation_level, cm.worlds[v].dilation_level) << s.name;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, SeedRun, ::testing::Range<std::size_t>(0, 20));

TEST(Seeds, TwentyBundled) { EXPECT_EQ(seeds().size(), 20u); }

}  // namespace
}  // namespace msa
