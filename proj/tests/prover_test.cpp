#include <random>

#include <gtest/gtest.h>

#include "msa/prover.hpp"
#include "test_util.hpp"

namespace msa {
namespace {

Signature props() { return parse_signature("p:\nq:\n"); }

bool provable(const Logic& l, std::vector<Term> left, std::vector<Term> right) {
  return prove(l, Sequent{std::move(left), std::move(right)}).provable;
}

TEST(Prove, SerialityAxiomInD) {
  ProofResult r = prove(Logic::D(), Sequent{{}, {dia(one())}});
  EXPECT_TRUE(r.provable);
  EXPECT_FALSE(r.rule_log().empty());
}

TEST(Prove, SerialityRefutedInKByDeadEnd) {
  ProofResult r = prove(Logic::K(), Sequent{{}, {dia(one())}});
  ASSERT_FALSE(r.provable);
  ASSERT_TRUE(r.countermodel);
  EXPECT_EQ(r.countermodel->size(), 1u);
  EXPECT_FALSE(r.countermodel->access[0][0]);
}

TEST(Prove, FourAxiomInK4) {
  Term p = gen("p");
  EXPECT_TRUE(provable(Logic::K4(), {box(p)}, {box(box(p))}));
  EXPECT_FALSE(provable(Logic::K(), {box(p)}, {box(box(p))}));
}

TEST(Prove, TAxiomInT) {
  Term p = gen("p");
  EXPECT_TRUE(provable(Logic::T(), {box(p)}, {p}));
  EXPECT_FALSE(provable(Logic::K4(), {box(p)}, {p}));
}

TEST(Prove, AxiomsProvableExactlyInContainingLogics) {
  Term p = gen("p");
  Term d = dia(one());
  Term t = imp(box(p), p);
  Term four = imp(box(p), box(box(p)));
  for (const Logic& l : all_logics()) {
    EXPECT_EQ(provable(l, {}, {d}), l.serial || l.reflexive) << l.name;
    EXPECT_EQ(provable(l, {}, {t}), l.reflexive) << l.name;
    EXPECT_EQ(provable(l, {}, {four}), l.transitive) << l.name;
  }
}

TEST(Prove, RuleNames) {
  Term p = gen("p"), q = gen("q");
  ProofResult r = prove(Logic::K(), Sequent{{box(land(p, q))}, {box(p)}});
  ASSERT_TRUE(r.provable);
  std::string log;
  for (const auto& line : r.rule_log()) log += line + "\n";
  EXPECT_NE(log.find("box-K"), std::string::npos);
  EXPECT_NE(log.find("and-L"), std::string::npos);
  EXPECT_NE(log.find("axiom"), std::string::npos);
}

TEST(Prove, RejectsQuantifiedInput) {
  EXPECT_THROW(prove(Logic::K(), Sequent{{cyl(0, gen("p"))}, {}}), Error);
}

TEST(Prove, BudgetReported) {
  Term f = gen("p");
  for (int k = 0; k < 6; ++k) f = lor(box(f), dia(land(f, gen("q"))));
  ProverOptions opts;
  opts.step_budget = 5;
  EXPECT_THROW(prove(Logic::S4(), Sequent{{}, {f}}, opts), BudgetExceeded);
}

TEST(Prove, LoopCheckTerminatesInS4) {
  Term p = gen("p");
  // Not an S4 theorem; needs the loop check to stop.
  ProofResult r = prove(Logic::S4(), Sequent{{dia(box(p))}, {box(dia(p))}});
  EXPECT_FALSE(r.provable);
  ASSERT_TRUE(r.countermodel);
  EXPECT_TRUE(frame_has(r.countermodel->access, Logic::S4().flags()));
  EXPECT_TRUE(provable(Logic::S4(), {box(p)}, {box(box(box(p)))}));
  EXPECT_FALSE(provable(Logic::K4(), {}, {imp(box(imp(box(p), p)), box(p))}));
}

TEST(Prove, CountermodelsFalsifyAndAreMinimal) {
  Term p = gen("p");
  ProofResult r = prove(Logic::K(), Sequent{{}, {box(p)}});
  ASSERT_TRUE(r.countermodel);
  EXPECT_EQ(r.countermodel->size(), 2u);
  EXPECT_FALSE(eval_prop(box(p), *r.countermodel)[r.countermodel->root]);
}

TEST(Interpolant, SidedExample) {
  Term p = gen("p"), q = gen("q");
  InterpolantProof r =
      prove_sided(Logic::K(), {{box(land(p, q)), Side::L}}, {{box(p), Side::R}});
  ASSERT_TRUE(r.proof.provable);
  ASSERT_TRUE(r.interpolant);
  EXPECT_EQ(*r.interpolant, box(p));
}

TEST(Ground, Examples) {
  Signature s1 = parse_signature("p: 0");
  auto dom = domain_labels(2);
  EXPECT_EQ(ground(cyl(0, gen("p")), dom, {0}, s1), lor(gen("p[a]"), gen("p[b]")));
  EXPECT_EQ(ground(gen("p"), dom, {0}, s1), gen("p[a]"));
  Signature s2 = parse_signature("p: 0 1");
  EXPECT_EQ(ground(subst(0, 1, gen("p")), dom, {0, 1}, s2), gen("p[b,b]"));
  EXPECT_THROW(ground(gen("p"), dom, {0}, s2), Error);
}

TEST(Ground, ExpandPerTuple) {
  Signature s = parse_signature("p: 0");
  auto rows = expand_quantifiers(gen("p"), domain_labels(2), 1, s);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].second, gen("p[b]"));
  EXPECT_THROW(expand_quantifiers(cyl(2, gen("p")), domain_labels(2), 1, s), Error);
}

TEST(Ground, AtomLabels) {
  GroundAtom a = parse_ground_atom("q[a,b]");
  EXPECT_EQ(a.name, "q");
  EXPECT_EQ(a.tuple, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(a.label(), "q[a,b]");
  EXPECT_EQ(parse_ground_atom("r").label(), "r");
}

TEST(Ground, CoherentWithEval) {
  Signature sig = testing_util::standard_signature();
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 200) {
    Term t = testing_util::random_term(rng, sig, 4, 1);
    int width = std::max(2, required_width({t}, sig));
    const std::size_t worlds = 1 + uniform(rng, 2), dsize = 1 + uniform(rng, 2);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < worlds; ++a)
      for (std::size_t b = 0; b < worlds; ++b)
        if (rng() & 1u) edges.emplace_back(a, b);
    KripkeSystem k = KripkeSystem::constant(worlds, dsize, edges);
    SpacePtr space = make_space(k, width);
    Valuation val;
    for (const auto& [g, dims] : sig.entries()) {
      val[g] = element_from(space, dims, [&](std::size_t, const std::vector<int>&) { return (rng() & 1u) != 0; });
    }
    AlgebraElement e = eval(t, space, val);
    // Induced propositional model over ground atoms.
    PropModel m;
    m.access = k.access;
    for (std::size_t x = 0; x < space->tuples(); ++x) {
      std::vector<int> tuple = space->decode(x);
      Term g = ground(t, k.domain, tuple, sig);
      for (const auto& label : generators(g)) {
        if (m.truth.count(label)) continue;
        GroundAtom atom = parse_ground_atom(label);
        std::vector<int> at(static_cast<std::size_t>(width), 0);
        const IndexSet& dims = sig.dims(atom.name);
        auto it = dims.begin();
        for (const auto& v : atom.tuple) {
          at[static_cast<std::size_t>(*it++)] =
              static_cast<int>(std::find(k.domain.begin(), k.domain.end(), v) - k.domain.begin());
        }
        std::vector<bool> truth(worlds);
        for (std::size_t w = 0; w < worlds; ++w) truth[w] = val.at(atom.name).at(w, space->encode(at));
        m.truth[label] = truth;
      }
      std::vector<bool> prop = eval_prop(g, m);
      for (std::size_t w = 0; w < worlds; ++w) ASSERT_EQ(prop[w], e.at(w, x)) << print(t);
    }
    ++checked;
  }
}

TEST(Consequence, Examples) {
  Signature sig = parse_signature("p: 0");
  Term p = gen("p");
  EXPECT_TRUE(consequence({p}, {p}, Logic::K(), 2, sig).holds);
  ConsequenceResult r = consequence({cyl(0, p)}, {p}, Logic::K(), 2, sig);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.failing_domain, 2);
  EXPECT_EQ(r.domain_bound, 2);
  EXPECT_TRUE(r.countermodel);
  EXPECT_TRUE(consequence({p}, {cyl(0, p)}, Logic::K(), 3, sig).holds);
  EXPECT_THROW(consequence({p}, {p}, Logic::K(), 0, sig), Error);
}

TEST(Consequence, CanonicalTuples) {
  auto ts = canonical_tuples({0, 2}, 3, 3);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0], (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(ts[1], (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(canonical_tuples({0, 1, 2}, 3, 3).size(), 5u);
  EXPECT_EQ(canonical_tuples({0, 1, 2}, 3, 2).size(), 4u);
}

TEST(Oracle, Examples) {
  Signature sig = props();
  Term p = gen("p");
  for (const Logic& l : all_logics()) {
    EXPECT_FALSE(bounded_countermodel(lor(neg(p), p), l, 3, 1, 0, sig).witness) << l.name;
  }
  OracleResult r = bounded_countermodel(box(p), Logic::K(), 2, 1, 0, sig);
  ASSERT_TRUE(r.witness);
  EXPECT_LE(r.witness->system.world_count(), 2u);
  EXPECT_FALSE(eval(box(p), r.witness->system, r.witness->valuation, 0).at(r.witness->world, 0));
  EXPECT_FALSE(bounded_countermodel(imp(box(p), p), Logic::T(), 3, 1, 0, sig).witness);
  EXPECT_TRUE(bounded_countermodel(imp(box(p), p), Logic::K(), 3, 1, 0, sig).witness);
}

TEST(Oracle, QuantifiedSearch) {
  Signature sig = parse_signature("p: 0");
  Term p = gen("p");
  OracleResult r = bounded_countermodel(imp(cyl(0, p), p), Logic::K(), 1, 2, 1, sig);
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_FALSE(eval(imp(cyl(0, p), p), r.witness->system, r.witness->valuation, 1)
                   .at(r.witness->world, make_space(r.witness->system, 1)->encode(r.witness->tuple)));
  EXPECT_FALSE(bounded_countermodel(imp(p, cyl(0, p)), Logic::K(), 2, 2, 1, sig).witness);
}

class Agreement : public ::testing::TestWithParam<int> {};

TEST_P(Agreement, ProverMatchesFrameSearch) {
  const Logic logic = all_logics()[static_cast<std::size_t>(GetParam())];
  Signature sig = props();
  std::mt19937_64 rng(100 + static_cast<std::uint64_t>(GetParam()));
  RandomTermOptions opts;
  opts.quantifiers = false;
  int valid = 0;
  for (int k = 0; k < 300; ++k) {
    opts.depth = 1 + static_cast<int>(uniform(rng, 5));
    Term t = random_term(rng, sig, opts);
    ProofResult r = prove(logic, Sequent{{}, {t}});
    std::optional<PropModel> oracle = propositional_countermodel(t, logic, 4);
    if (r.provable) {
      ++valid;
      EXPECT_FALSE(oracle) << logic.name << " " << print(t);
    } else {
      ASSERT_TRUE(r.countermodel);
      EXPECT_FALSE(eval_prop(t, *r.countermodel)[r.countermodel->root]);
      if (r.countermodel->size() <= 4) {
        EXPECT_TRUE(oracle) << logic.name << " " << print(t);
      }
    }
    if (oracle) EXPECT_FALSE(r.provable);
    for (const Logic& stronger : all_logics()) {
      if (r.provable && stronger.extends(logic)) {
        EXPECT_TRUE(prove(stronger, Sequent{{}, {t}}).provable) << stronger.name << " " << print(t);
      }
    }
  }
  EXPECT_GT(valid, 0);
}

INSTANTIATE_TEST_SUITE_P(Logics, Agreement, ::testing::Range(0, 6));

}  // namespace
}  // namespace msa
