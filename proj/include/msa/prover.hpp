#pragma once

// Sequent-calculus prover for K, D, T, K4, D4 and S4, bounded-domain
// grounding of quantified terms, the bounded consequence relation, and the
// exhaustive frame oracle used to cross-check the prover.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msa/kripke.hpp"
#include "msa/syntax.hpp"

namespace msa {

struct Logic {
  std::string name = "K";
  bool serial = false;
  bool reflexive = false;
  bool transitive = false;

  FrameFlags flags() const { return {serial, reflexive, transitive}; }
  // Every theorem of `other` is a theorem of this logic.
  bool extends(const Logic& other) const;

  static Logic K() { return {"K", false, false, false}; }
  static Logic D() { return {"D", true, false, false}; }
  static Logic T() { return {"T", false, true, false}; }
  static Logic K4() { return {"K4", false, false, true}; }
  static Logic D4() { return {"D4", true, false, true}; }
  static Logic S4() { return {"S4", false, true, true}; }
};

Logic logic_from_name(const std::string& name);  // throws on unknown names
std::vector<Logic> all_logics();

struct Sequent {
  std::vector<Term> left;
  std::vector<Term> right;
};

std::string to_string(const Sequent& s);

// ---------------------------------------------------------------------------
// Grounding

struct GroundAtom {
  std::string name;
  std::vector<std::string> tuple;  // values of the declared coordinates, ascending

  // "p" for a generator without coordinates, otherwise "p[a,b]".
  std::string label() const;
};

GroundAtom parse_ground_atom(const std::string& label);

// Grounding of t at one ambient assignment (one element id per coordinate
// below width).  The result has no Cyl or Subst; its generators are ground
// atom labels.
Term ground(const Term& t, const std::vector<std::string>& domain, const std::vector<int>& ambient,
            const Signature& sig);

// One grounded formula per ambient tuple in ^width domain, in tuple order.
std::vector<std::pair<std::vector<int>, Term>> expand_quantifiers(const Term& t,
                                                                 const std::vector<std::string>& domain,
                                                                 int width, const Signature& sig);

// Smallest width covering every index of the terms and the declared
// coordinates of their generators.
int required_width(const std::vector<Term>& ts, const Signature& sig);

std::vector<std::string> domain_labels(std::size_t n);

// ---------------------------------------------------------------------------
// Propositional Kripke models

struct PropModel {
  std::vector<std::vector<bool>> access;
  std::map<std::string, std::vector<bool>> truth;  // atom -> per-world value
  std::size_t root = 0;

  std::size_t size() const { return access.size(); }
};

// Truth of a propositional modal term at every world; atoms missing from the
// model are false.
std::vector<bool> eval_prop(const Term& t, const PropModel& m);

// As a one-element-domain Kripke system with width 0.
KripkeSystem to_kripke(const PropModel& m);
std::string model_to_json(const PropModel& m);

// ---------------------------------------------------------------------------
// Proving

enum class Side : std::uint8_t { L, R };

struct ProofStep {
  std::string rule;  // or-L, or-R, not-L, not-R, and-L, and-R, box-K, box-T, box-4, dia, serial, axiom, loop
  std::string sequent;
  std::vector<std::size_t> premises;  // indices into ProofResult::steps
};

struct ProverOptions {
  std::size_t step_budget = 2000000;
  bool minimize = true;
  bool record_proof = true;
};

struct ProofResult {
  bool provable = false;
  std::vector<ProofStep> steps;  // steps[root] concludes the input sequent
  std::size_t root = 0;
  std::optional<PropModel> countermodel;  // set when refuted
  std::size_t search_steps = 0;

  std::vector<std::string> rule_log() const;  // depth-first, "depth rule sequent"
};

ProofResult prove(const Logic& logic, const Sequent& s, const ProverOptions& opts = {});

// Interpolant extraction: every formula carries a side.  For a provable
// sequent the returned term I satisfies (L-left |- L-right, I) and
// (R-left, I |- R-right) with atoms shared by both sides.
struct SidedFormula {
  Term formula;
  Side side = Side::L;
};

struct InterpolantProof {
  ProofResult proof;
  std::optional<Term> interpolant;
};

InterpolantProof prove_sided(const Logic& logic, const std::vector<SidedFormula>& left,
                             const std::vector<SidedFormula>& right, const ProverOptions& opts = {});

// ---------------------------------------------------------------------------
// Bounded consequence

struct ConsequenceResult {
  bool holds = true;
  int domain_bound = 0;
  int width = 0;
  std::size_t proofs = 0;  // ground sequents decided
  // First failure: domain size, ambient tuple, and the ground countermodel.
  int failing_domain = 0;
  std::vector<int> failing_tuple;
  std::optional<PropModel> countermodel;
};

ConsequenceResult consequence(const std::vector<Term>& gamma, const std::vector<Term>& delta, const Logic& logic,
                              int domain_bound, const Signature& sig, const ProverOptions& opts = {});

// Ambient tuples over the coordinates in `coords` (others fixed to element
// 0), one representative per permutation class of the domain.
std::vector<std::vector<int>> canonical_tuples(const IndexSet& coords, int width, int domain_size);

// ---------------------------------------------------------------------------
// Frame oracle

struct FrameWitness {
  KripkeSystem system;
  Valuation valuation;
  int width = 0;
  std::size_t world = 0;
  std::vector<int> tuple;
};

struct OracleResult {
  std::optional<FrameWitness> witness;
  bool exhaustive = true;
  std::size_t checked = 0;
};

// Searches systems within bounds whose frame has the logic's properties for
// a point where t is 0.  Propositional terms use a rooted-frame search with
// all valuations evaluated at once.
OracleResult bounded_countermodel(const Term& t, const Logic& logic, int max_worlds, int max_domain, int width,
                                  const Signature& sig, std::size_t valuation_budget = 1u << 16);

// Propositional search only; returns the falsifying model.
std::optional<PropModel> propositional_countermodel(const Term& t, const Logic& logic, int max_worlds);

}  // namespace msa
