#pragma once

// Theory/cotheory pairs, separability, the saturation construction, the
// modal witness step and the countermodel pipeline built from saturated
// pairs.  Every verdict is relative to the domain bound and the enumerated
// fragment of the term algebra.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "msa/kripke.hpp"
#include "msa/prover.hpp"
#include "msa/syntax.hpp"

namespace msa {

struct SaturationConfig {
  Logic logic;
  Signature sig;
  int domain_bound = 2;
  // Enumerations of Sg X1 / Sg X2 list terms up to this depth after the
  // subterms of the input.
  int depth = 1;
  // Items processed per side; 0 processes the whole enumeration.
  std::size_t steps = 0;
  // Enumerated terms per side after the seeds.
  std::size_t enumeration_limit = 120;
  // Candidates tried by separable before falling back to interpolation.
  std::size_t candidate_limit = 200;
  // Modal depth of the world tree; negative uses the modal depth of the input.
  int world_depth = -1;
  std::size_t max_worlds = 24;
  bool prune = true;
  ProverOptions prover;
};

class SeparableInput : public Error {
 public:
  using Error::Error;
};

struct Separation {
  Term witness;
  std::string method;  // "enumeration" or "interpolant"
};

// A common-vocabulary term c with Gamma -> c and c -> Delta, or none
// (inseparable at the bound).  With enumerate=false the interpolant route is
// tried first.
std::optional<Separation> separable(const std::vector<Term>& gamma, const std::vector<Term>& delta,
                                    const std::set<std::string>& common, const SaturationConfig& cfg,
                                    bool enumerate = true);

struct TraceEntry {
  std::size_t step = 0;
  char side = 'T';      // 'T' for a_n, 'F' for b_n
  Term term;
  std::string action;   // "skip-separable", "add", "add-witness", "already-witnessed"
  std::optional<Index> witness_index;
  std::optional<Term> witness;
  std::optional<Term> separator;  // for skips
};

struct TheoryPair {
  std::vector<Term> theory;    // generators of T, in insertion order
  std::vector<Term> cotheory;  // generators of F
  std::size_t stage = 0;       // creation order in the world construction
  Index dilation_level = 0;    // index high-water mark after saturation
  std::vector<TraceEntry> log;

  // Closure membership: T -> a, resp. b -> F, at the bound.
  bool in_theory(const Term& a, const SaturationConfig& cfg) const;
  bool in_cotheory(const Term& b, const SaturationConfig& cfg) const;
};

// Size-ordered terms over `vocab` up to `depth`, using indices in `indices`.
std::vector<Term> enumerate_terms(const std::set<std::string>& vocab, const IndexSet& indices, int depth,
                                  const Signature& sig, std::size_t limit);

TheoryPair saturate(const std::vector<Term>& gamma, const std::vector<Term>& delta, const std::set<std::string>& x1,
                    const std::set<std::string>& x2, const SaturationConfig& cfg, IndexSupply& supply);

struct ConditionCheck {
  int condition = 0;  // 1..6
  bool pass = true;
  std::size_t checked = 0;
  std::string detail;
};

struct SaturationReport {
  std::vector<ConditionCheck> conditions;
  bool pass(int condition) const;
  bool all() const;
};

SaturationReport check_saturated(const TheoryPair& pair, const std::vector<Term>& universe,
                                 const std::set<std::string>& x1, const std::set<std::string>& x2,
                                 const SaturationConfig& cfg);

// Subterms of every term in the trace and the pair.
std::vector<Term> trace_universe(const TheoryPair& pair);

struct ModalChild {
  std::string origin;  // "dia <a>" or "box <b>"
  std::vector<Term> start_theory;
  std::vector<Term> start_cotheory;
  bool claim_holds = true;  // start pair inseparable
  std::optional<Term> separator;
  std::optional<TheoryPair> pair;  // saturated extension when claim_holds
};

std::vector<ModalChild> modal_witness_step(const TheoryPair& pair, const std::set<std::string>& x1,
                                           const std::set<std::string>& x2, const SaturationConfig& cfg,
                                           IndexSupply& supply);

struct ReportLine {
  Term term;
  bool expected = false;
  bool actual = false;
};

struct Countermodel {
  KripkeSystem system;
  Valuation valuation;
  int width = 0;
  std::size_t world = 0;
  std::vector<int> tuple;
  std::vector<TheoryPair> worlds;  // one per world of the system
  std::vector<ReportLine> report;
  bool pass = false;
  std::vector<std::string> findings;  // claim violations, psi disagreements, monotonicity
  std::size_t pruned = 0;
};

Countermodel build_countermodel(const std::vector<Term>& gamma, const std::vector<Term>& delta,
                                const std::set<std::string>& x1, const std::set<std::string>& x2,
                                const SaturationConfig& cfg, IndexSupply& supply);

std::string trace_to_json(const TheoryPair& pair);

// Inseparable starting pairs.  File format:
// {"signature": "...", "seeds": [{name, logic, gamma: [...], delta: [...], X1?, X2?, signature?}]}
// X1 and X2 default to the generators of gamma and delta.
struct SeedPair {
  std::string name;
  Logic logic;
  Signature sig;
  std::vector<Term> gamma;
  std::vector<Term> delta;
  std::set<std::string> x1;
  std::set<std::string> x2;
};

std::vector<SeedPair> load_seed_pairs(std::string_view json_text);
std::vector<SeedPair> load_seed_pairs_file(const std::string& path);

}  // namespace msa
