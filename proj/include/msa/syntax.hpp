#pragma once

// Term language of modal substitution algebras: the Boolean connectives,
// the box, cylindrifications c_i and substitutions.  Subst(over=u, from=l, t)
// overwrites coordinate u of an assignment with the value at coordinate l
// before evaluating t.  Diamond, q_i and implication are parser sugar only.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "msa/error.hpp"

namespace msa {

using Index = int;
using IndexSet = std::set<Index>;

enum class Op : std::uint8_t { Zero, One, Not, Or, And, Box, Cyl, Subst, Gen };

class Term {
 public:
  Term();  // Zero

  Op op() const;
  std::size_t arity() const;
  const Term& arg(std::size_t i = 0) const;
  // Cyl: the quantified index.
  Index index() const;
  // Subst: coordinate being overwritten, and coordinate read.
  Index over() const;
  Index from() const;
  const std::string& name() const;

  std::size_t hash() const;
  // Number of nodes.
  std::size_t size() const;
  // Nesting depth of box.
  int modal_depth() const;
  // Largest index mentioned anywhere in the term, or -1.
  Index max_index() const;

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b);
  // Size first, then structure; total and deterministic.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;

  friend Term make_node(Op, Index, Index, std::string, std::vector<Term>);
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

Term zero();
Term one();
Term neg(Term t);
Term lor(Term a, Term b);
Term land(Term a, Term b);
Term box(Term t);
Term cyl(Index i, Term t);
Term subst(Index over, Index from, Term t);
Term gen(std::string name);

// Sugar, expanded at construction.
Term dia(Term t);            // not box not
Term qall(Index i, Term t);  // not c_i not
Term imp(Term a, Term b);    // (not a) or b

// n-ary helpers; empty conjunction is One, empty disjunction is Zero.
Term conj(const std::vector<Term>& ts);
Term disj(const std::vector<Term>& ts);

bool is_dia(const Term& t);
bool is_qall(const Term& t);
bool is_propositional(const Term& t);  // no Cyl/Subst

// Generator names occurring in t.
std::set<std::string> generators(const Term& t);
// Every index mentioned (bound, free, or substitution targets).
IndexSet mentioned_indices(const Term& t);

class Signature {
 public:
  Signature() = default;
  explicit Signature(std::map<std::string, IndexSet> dims) : dims_(std::move(dims)) {}

  void declare(const std::string& name, IndexSet dims);
  bool declared(const std::string& name) const;
  // Throws SignatureError for unknown names.
  const IndexSet& dims(const std::string& name) const;
  const std::map<std::string, IndexSet>& entries() const { return dims_; }
  Signature merged(const Signature& other) const;

 private:
  std::map<std::string, IndexSet> dims_;
};

// Line format: `NAME ":" NAT*`.  Blank lines and `#` comments are ignored.
Signature parse_signature(std::string_view text);
std::string to_string(const Signature& sig);

Term parse(std::string_view text, const Signature& sig);
// Parses without checking generators against a signature.
Term parse_unchecked(std::string_view text);

// Raw s-expression, no sugar.  parse(print(t)) == t.
std::string print(const Term& t);
// Re-sugars dia, q and imp for display; still parseable.
std::string pretty(const Term& t);

// Syntactic upper bound of the dimension set.
IndexSet free_indices(const Term& t, const Signature& sig);
bool in_neat_reduct(const Term& t, Index cutoff, const Signature& sig);

struct RandomTermOptions {
  int depth = 4;
  Index max_index = 2;  // indices drawn from 0..max_index
  bool modal = true;
  bool quantifiers = true;  // Cyl and Subst
  std::vector<std::string> generators;  // empty: every generator of the signature
};

// Uniform over node kinds at each level; leaves are constants or generators.
Term random_term(std::mt19937_64& rng, const Signature& sig, const RandomTermOptions& opts);

// Unbounded supply of fresh indices.  Not thread-safe; one owner at a time.
class IndexSupply {
 public:
  explicit IndexSupply(Index next = 0, IndexSet reserved = {})
      : next_(next), reserved_(std::move(reserved)) {}

  Index fresh(const IndexSet& avoid);
  void reserve(const IndexSet& indices);
  Index next() const { return next_; }
  const std::vector<Index>& issued() const { return issued_; }

 private:
  Index next_;
  IndexSet reserved_;
  std::vector<Index> issued_;
};

Index fresh_index(IndexSupply& supply, const IndexSet& avoid);

}  // namespace msa
