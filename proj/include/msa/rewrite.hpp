#pragma once

// Oriented normalization of terms and the bounded semantic equality oracle
// that every identity check is grounded in.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msa/kripke.hpp"
#include "msa/syntax.hpp"
#include "msa/transform.hpp"

namespace msa {

struct Rule {
  std::string name;
  std::string identity;  // catalogue entry licensing the rule
  std::string description;
};

// The rules applied by normalize, in the order they are tried at a node.
const std::vector<Rule>& rule_set();

struct NormalizeOptions {
  std::size_t step_limit = 200000;
};

struct NormalizeStats {
  std::map<std::string, std::size_t> fired;  // rule name -> count
  std::size_t passes = 0;
};

// Fixpoint of the rule set.  Throws Error when the step limit is hit.
Term normalize(const Term& t, const Signature& sig, const NormalizeOptions& opts = {},
               NormalizeStats* stats = nullptr);

struct Bounds {
  int max_worlds = 2;
  int max_domain = 2;
  int max_indices = 3;
};

struct EqOptions {
  // Exhaustive when the number of (system, valuation) pairs is at most this.
  std::size_t exhaustive_budget = 4096;
  std::size_t samples = 300;
  std::uint64_t seed = 1;
  // Restrict systems to a frame class (used by the logic-aware callers).
  FrameFlags frames;
};

struct Witness {
  KripkeSystem system;
  Valuation valuation;
  int width = 0;
  std::size_t world = 0;
  std::vector<int> tuple;
  bool left_value = false;
};

struct EqResult {
  bool equal = true;
  bool exhaustive = false;
  std::size_t checked = 0;  // (system, valuation) pairs evaluated
  int width = 0;
  std::optional<Witness> witness;
};

// eval(t) = eval(u) on every system within bounds; see EqOptions for the
// enumeration policy.  Width is max(max_indices, largest index + 1).
EqResult eq_at_bound(const Term& t, const Term& u, const Signature& sig, const Bounds& bounds,
                     const EqOptions& opts = {});

std::string describe(const Witness& w, const Signature& sig);

// ---------------------------------------------------------------------------
// Identity catalogue

struct IdentityReport {
  std::string name;
  std::string statement;
  std::string reading;  // substitution convention assumed
  bool pass = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // draws that violated the side condition
  std::size_t exhaustive = 0;  // instances decided exhaustively
  std::string counterexample;
};

struct IdentityOptions {
  std::uint64_t seed = 1;
  int term_depth = 3;
  EqOptions eq;
};

// Names: ax1..ax14, L1..L7, T5-4(i)..T5-4(v), ax1-as-printed.
std::vector<std::string> identity_names();
bool is_identity_name(const std::string& name);
// Signature the metavariables range over.
Signature identity_signature();

// Each trial draws an instance satisfying the side condition (draws that do
// not are counted as skipped) and decides it with eq_at_bound.
IdentityReport check_identity(const std::string& name, std::size_t trials, const Bounds& bounds,
                              const IdentityOptions& opts = {});

}  // namespace msa
