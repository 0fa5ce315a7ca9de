#pragma once

// Finite transformations of the index set, substitution chains realizing
// s_tau, and bounded richness checks for transformation semigroups.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "msa/syntax.hpp"

namespace msa {

// Endomap of the naturals that is the identity outside a finite set.
class FiniteTransformation {
 public:
  FiniteTransformation() = default;
  // Identity entries are dropped.
  explicit FiniteTransformation(const std::map<Index, Index>& entries);

  static FiniteTransformation replacement(Index i, Index j);   // [i|j]
  static FiniteTransformation transposition(Index i, Index j);  // [i,j]

  Index operator()(Index i) const;
  IndexSet support() const;
  // Images of the support points, in support order.
  std::vector<Index> image() const;
  const std::map<Index, Index>& entries() const { return map_; }
  bool is_identity() const { return map_.empty(); }
  // Identity outside `keep`.
  FiniteTransformation restricted(const IndexSet& keep) const;

  friend bool operator==(const FiniteTransformation&, const FiniteTransformation&) = default;

 private:
  std::map<Index, Index> map_;
};

// result(i) = sigma(tau(i))
FiniteTransformation compose(const FiniteTransformation& sigma, const FiniteTransformation& tau);
// tau[i|j]
FiniteTransformation update(const FiniteTransformation& tau, Index i, Index j);

std::string to_json(const FiniteTransformation& t);
FiniteTransformation transformation_from_json(std::string_view text);

struct SubstPair {
  Index over;
  Index from;
  friend bool operator==(const SubstPair&, const SubstPair&) = default;
};

// Substitution pairs, outermost first.  The innermost pair acts first on
// the evaluated term, so the list reads right to left as an action.
using SubstChain = std::vector<SubstPair>;

// s_tau via k fresh intermediate indices: the first k naturals outside
// `blocked`.  Caller passes blocked >= dims(x) + supp(tau) + image(tau).
SubstChain decompose_s_tau(const FiniteTransformation& tau, const IndexSet& blocked);

// Wraps t in the chain (chain[0] outermost).
Term apply_chain(const SubstChain& chain, Term t);
// s_tau t using decompose_s_tau with blocked = dims(t) + supp + image.
Term s_tau(const FiniteTransformation& tau, const Term& t, const Signature& sig);

// Net effect of a chain on assignments: evaluating the chain over t at x
// evaluates t at x o result.
FiniteTransformation chain_action(const SubstChain& chain);
// Shortest direct chain with the given action when one exists without
// temporaries (no cyclic read/write dependency); otherwise falls back to
// decompose_s_tau with temporaries outside `avoid`.
SubstChain chain_for(const FiniteTransformation& tau, const IndexSet& avoid);

// ---------------------------------------------------------------------------
// Semigroups generated by eventually-translating maps.

// f(x) = table[x] for x < table.size(), x + shift otherwise.  Kept in a
// normal form (shortest table), so equality is equality of maps on all of N.
class ShiftMap {
 public:
  ShiftMap() = default;
  ShiftMap(std::vector<long> table, long shift);

  static ShiftMap identity() { return {}; }
  static ShiftMap suc();
  static ShiftMap pred();
  static ShiftMap rep(long i, long j);
  static ShiftMap swap(long i, long j);

  long operator()(long x) const;
  long shift() const { return shift_; }
  std::size_t threshold() const { return table_.size(); }
  bool finite_support() const { return shift_ == 0; }
  // Only meaningful when finite_support().
  std::vector<long> support() const;
  // Naturals not in the range (always finite).
  std::vector<long> missing_from_range() const;
  ShiftMap updated(long i, long j) const;  // f[i|j]
  // Every index outside Rg(other) reset to the identity.
  ShiftMap reset_outside_range_of(const ShiftMap& other) const;
  std::string describe(long window) const;

  friend bool operator==(const ShiftMap&, const ShiftMap&) = default;
  friend auto operator<=>(const ShiftMap&, const ShiftMap&) = default;

 private:
  void normalize();
  std::vector<long> table_;
  long shift_ = 0;
};

ShiftMap compose(const ShiftMap& f, const ShiftMap& g);  // f o g
ShiftMap power(const ShiftMap& f, int n);

struct SemigroupRule {
  std::string name;  // suc, pred, id, rep, swap
  long i = 0;
  long j = 0;
  std::string label() const;
};

struct SemigroupSpec {
  std::vector<SemigroupRule> generators;
  int depth = 3;
  long window = 8;
};

// Lines: `window N`, `depth N`, `suc`, `pred`, `id`, `rep I J`, `swap I J`,
// `rep-all N` (every [i|j], i,j<N), `swap-all N`.  `#` starts a comment.
SemigroupSpec parse_semigroup_spec(std::string_view text);
ShiftMap rule_map(const SemigroupRule& rule, long window);  // throws on window overflow

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct ConditionResult {
  int condition = 0;
  Verdict verdict = Verdict::Inconclusive;
  std::string detail;
};

struct RichnessReport {
  std::vector<ConditionResult> conditions;  // (1), (2), (3)
  std::size_t fragment_size = 0;
  bool fragment_closed = false;  // no new elements at the last depth
  int depth = 0;
  long window = 0;
  std::string note;
};

RichnessReport rich_check(const SemigroupSpec& spec);

struct StrongRichnessRow {
  int n = 0;
  Verdict verdict = Verdict::Pass;
  std::vector<long> support;  // of sigma^n o pi^n, when finite
  std::string detail;
};

struct StrongRichnessReport {
  std::vector<StrongRichnessRow> rows;
  bool all_pass = false;
  long window = 0;
};

StrongRichnessReport strongly_rich_check(const SemigroupRule& sigma, const SemigroupRule& pi, int n_max,
                                         long window);

}  // namespace msa
