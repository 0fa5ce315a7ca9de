#include <chrono>
#include <random>

#include <gtest/gtest.h>

#include "msa/rewrite.hpp"
#include "test_util.hpp"

namespace msa {
namespace {

Signature pq() { return parse_signature("p: 0 1\nq: 0\n"); }

TEST(Normalize, SubstIdentity) { EXPECT_EQ(normalize(subst(0, 0, gen("p")), pq()), gen("p")); }

TEST(Normalize, CylOfZero) { EXPECT_EQ(normalize(cyl(1, zero()), pq()), zero()); }

TEST(Normalize, SubstOverBoundIndex) {
  EXPECT_EQ(normalize(subst(1, 0, cyl(1, gen("p"))), pq()), cyl(1, gen("p")));
}

TEST(Normalize, CylsAscending) {
  Signature sig = parse_signature("p: 0 1");
  EXPECT_EQ(normalize(cyl(1, cyl(0, gen("p"))), sig), cyl(0, cyl(1, gen("p"))));
  EXPECT_EQ(normalize(cyl(0, cyl(1, gen("p"))), sig), cyl(0, cyl(1, gen("p"))));
}

TEST(Normalize, BooleanBasics) {
  Signature sig = pq();
  Term p = gen("p");
  EXPECT_EQ(normalize(neg(neg(p)), sig), p);
  EXPECT_EQ(normalize(lor(p, neg(p)), sig), one());
  EXPECT_EQ(normalize(land(p, land(one(), p)), sig), p);
  EXPECT_EQ(normalize(box(land(one(), one())), sig), one());
}

TEST(Normalize, RecordsRules) {
  NormalizeStats stats;
  normalize(cyl(1, lor(gen("p"), gen("q"))), pq(), {}, &stats);
  EXPECT_GT(stats.fired["cyl-join"], 0u);
  EXPECT_GT(stats.fired["cyl-vacuous"], 0u);
}

TEST(Normalize, UndeclaredGenerator) { EXPECT_THROW(normalize(gen("zz"), pq()), SignatureError); }

TEST(Normalize, SoundAndIdempotent) {
  std::mt19937_64 rng(99);
  Signature sig = testing_util::standard_signature();
  for (int n = 0; n < 150; ++n) {
    Term t = testing_util::random_term(rng, sig, 5, 2);
    Term nt = normalize(t, sig);
    EXPECT_EQ(normalize(nt, sig), nt) << print(t);
    EqResult r = eq_at_bound(t, nt, sig, {});
    EXPECT_TRUE(r.equal) << print(t) << " -> " << print(nt) << " " << describe(*r.witness, sig);
  }
}

TEST(EqAtBound, DoubleNegation) {
  Signature sig = parse_signature("p: 0");
  EqResult r = eq_at_bound(gen("p"), neg(neg(gen("p"))), sig, {});
  EXPECT_TRUE(r.equal);
  EXPECT_GT(r.checked, 0u);
}

TEST(EqAtBound, CylDiffersWithTwoElements) {
  Signature sig = parse_signature("p: 0");
  EqResult r = eq_at_bound(cyl(0, gen("p")), gen("p"), sig, {});
  EXPECT_FALSE(r.equal);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->system.domain.size(), 2u);
  EXPECT_TRUE(r.exhaustive);
}

TEST(EqAtBound, BoxOfOne) {
  EXPECT_TRUE(eq_at_bound(box(one()), one(), pq(), {}).equal);
}

TEST(EqAtBound, AxiomFourInteraction) {
  Signature sig = pq();
  for (Index i = 0; i < 3; ++i) {
    for (const Term& x : {gen("p"), gen("q"), neg(gen("p"))}) {
      for (const Term& y : {gen("p"), gen("q"), box(gen("q"))}) {
        EXPECT_TRUE(eq_at_bound(cyl(i, land(x, cyl(i, y))), land(cyl(i, x), cyl(i, y)), sig, {}).equal);
      }
    }
  }
}

TEST(EqAtBound, SamplingReportsCount) {
  Signature sig = parse_signature("p: 0 1\nq: 0 1\nr: 0 1");
  EqOptions opts;
  opts.exhaustive_budget = 10;
  opts.samples = 123;
  EqResult r = eq_at_bound(land(gen("p"), lor(gen("q"), gen("r"))),
                           lor(land(gen("p"), gen("q")), land(gen("p"), gen("r"))), sig, {}, opts);
  EXPECT_TRUE(r.equal);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_EQ(r.checked, 123u);
}

TEST(Identity, L1) {
  IdentityReport r = check_identity("L1", 200, {});
  EXPECT_TRUE(r.pass) << r.counterexample;
  EXPECT_EQ(r.checked, 200u);
}

TEST(Identity, T54iv) {
  IdentityReport r = check_identity("T5-4(iv)", 200, {});
  EXPECT_TRUE(r.pass) << r.counterexample;
}

TEST(Identity, Ax13SkipsDegenerateDraws) {
  IdentityReport r = check_identity("ax13", 50, {});
  EXPECT_TRUE(r.pass) << r.counterexample;
  EXPECT_GT(r.skipped, 0u);
  EXPECT_EQ(r.checked, 50u);
}

TEST(Identity, PrintedAxiomOneFails) {
  IdentityReport r = check_identity("ax1-as-printed", 200, {});
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.counterexample.empty());
}

TEST(Identity, UnknownName) { EXPECT_THROW(check_identity("L9", 1, {}), Error); }

TEST(Identity, CatalogueNames) {
  auto names = identity_names();
  EXPECT_EQ(names.size(), 27u);
  EXPECT_TRUE(is_identity_name("T5-4(v)"));
}

}  // namespace
}  // namespace msa
