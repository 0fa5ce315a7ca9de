#pragma once

// Craig interpolants: extraction from signed proofs, re-abstraction of
// ground interpolants for quantified problems, and independent verification.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "msa/prover.hpp"

namespace msa {

struct InterpolationProblem {
  std::string name;
  Logic logic;
  Term left;   // A
  Term right;  // B
  Signature sig;
  std::set<std::string> x1;  // contains gens(A)
  std::set<std::string> x2;  // contains gens(B)
  std::optional<Term> expected;
};

// Thrown when A does not entail B at the requested bound.
class NotDerivable : public Error {
 public:
  using Error::Error;
};

struct InterpolationResult {
  Term interpolant;
  ProofResult left_proof;   // A |- I
  ProofResult right_proof;  // I |- B
  bool vocabulary_ok = false;
  bool index_ok = false;
  int domain_bound = 0;
  // How the interpolant was found: "proof", "abstraction", "lifted",
  // "candidate", or "ground" when re-abstraction failed.
  std::string method;
  bool reabstracted = true;
  std::optional<Term> ground_interpolant;  // set for quantified problems
};

InterpolationResult interpolate(const InterpolationProblem& p, int domain_bound, const ProverOptions& opts = {});

struct InterpolantCheck {
  bool left_ok = false;    // A -> I
  bool right_ok = false;   // I -> B
  bool vocabulary_ok = false;
  bool index_ok = false;
  std::vector<std::string> failures;

  bool all() const { return left_ok && right_ok && vocabulary_ok && index_ok; }
};

InterpolantCheck verify_interpolant(const InterpolationProblem& p, const Term& interpolant, int domain_bound,
                                    const ProverOptions& opts = {});

bool is_quantified(const Term& t, const Signature& sig);

// Corpus format: {"signature": "p: 0\n...", "problems": [{"name": ...,
//   "logic": "K", "A": sexpr, "B": sexpr, "X1": [...], "X2": [...],
//   "expected": sexpr (optional)}]}.  X1/X2 default to the generators of
// A and B.
std::vector<InterpolationProblem> load_corpus(std::string_view json_text);
std::vector<InterpolationProblem> load_corpus_file(const std::string& path);

}  // namespace msa
