#pragma once

// Finite Kripke systems with increasing domains and the concrete algebra of
// world-indexed truth tables over assignment tuples.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "msa/syntax.hpp"

namespace msa {

struct KripkeSystem {
  std::vector<std::string> worlds;
  std::vector<std::vector<bool>> access;  // access[w][v]: w R v
  std::vector<std::string> domain;
  std::vector<std::vector<int>> world_domain;  // sorted element ids per world

  std::size_t world_count() const { return worlds.size(); }
  bool related(std::size_t w, std::size_t v) const { return access[w][v]; }
  std::vector<std::size_t> successors(std::size_t w) const;

  // One world per label, every world with the full domain.
  static KripkeSystem constant(std::size_t worlds, std::size_t domain_size,
                               const std::vector<std::pair<std::size_t, std::size_t>>& edges);
};

std::vector<std::string> validate_system(const KripkeSystem& k);

std::string to_json(const KripkeSystem& k);
KripkeSystem system_from_json(std::string_view text);

// F_K at a fixed tuple width.  Tuples are encoded in base |D| over the
// global domain; entries for tuples outside D_w^width are kept at 0.
class Space {
 public:
  Space(KripkeSystem system, int width);

  const KripkeSystem& system() const { return system_; }
  int width() const { return width_; }
  std::size_t worlds() const { return system_.world_count(); }
  std::size_t tuples() const { return tuples_; }
  bool valid(std::size_t w, std::size_t tuple) const { return valid_[w][tuple] != 0; }
  int coordinate(std::size_t tuple, int i) const;
  std::size_t with_coordinate(std::size_t tuple, int i, int value) const;
  std::size_t encode(const std::vector<int>& elements) const;
  std::vector<int> decode(std::size_t tuple) const;
  // Count of valid (world, tuple) cells.
  std::size_t cells() const { return cells_; }

 private:
  KripkeSystem system_;
  int width_;
  std::size_t dsize_;
  std::size_t tuples_;
  std::size_t cells_ = 0;
  std::vector<std::size_t> pow_;
  std::vector<std::vector<std::uint8_t>> valid_;
};

using SpacePtr = std::shared_ptr<const Space>;
SpacePtr make_space(KripkeSystem system, int width);

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(SpacePtr space, bool value);

  const SpacePtr& space() const { return space_; }
  bool at(std::size_t w, std::size_t tuple) const { return bits_[w * space_->tuples() + tuple] != 0; }
  void set(std::size_t w, std::size_t tuple, bool v);
  int width() const { return space_ ? space_->width() : 0; }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b);

 private:
  SpacePtr space_;
  std::vector<std::uint8_t> bits_;
  friend class ElementOps;
};

AlgebraElement join(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement meet(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement complement(const AlgebraElement& a);
AlgebraElement box(const AlgebraElement& a);
AlgebraElement cyl(Index i, const AlgebraElement& a);
AlgebraElement subst(Index over, Index from, const AlgebraElement& a);

// Pointwise order at every world; throws on shape mismatch.
bool leq(const AlgebraElement& e, const AlgebraElement& f);
// wRw' and e(w,x)=1 imply e(w',x)=1.
bool monotone_check(const KripkeSystem& k, const AlgebraElement& e);

// Element depending only on the coordinates in `dims`: fn(world, values of
// those coordinates in ascending order).
AlgebraElement element_from(const SpacePtr& space, const IndexSet& dims,
                            const std::function<bool(std::size_t, const std::vector<int>&)>& fn);
AlgebraElement random_element(const SpacePtr& space, std::mt19937_64& rng);

using Valuation = std::map<std::string, AlgebraElement>;

// Checks the dependence invariant of each generator against its dims.
std::vector<std::string> validate_valuation(const Valuation& val, const Signature& sig);

// Format: {"width": n, "generators": {"p": {"default": 0,
//   "entries": [["w0", ["a", "b"], 1], ...]}}} where a tuple lists the
// values of the generator's declared coordinates in ascending order.
std::string to_json(const Valuation& val, const Signature& sig);
Valuation valuation_from_json(std::string_view text, const SpacePtr& space, const Signature& sig);

AlgebraElement eval(const Term& t, const SpacePtr& space, const Valuation& val);
AlgebraElement eval(const Term& t, const KripkeSystem& k, const Valuation& val, int width);
// Evaluates several terms sharing one cache of common subterms.
std::vector<AlgebraElement> eval_all(const std::vector<Term>& ts, const SpacePtr& space, const Valuation& val);

// ---------------------------------------------------------------------------
// Axiom verification in F_K

struct AxiomResult {
  std::string name;
  bool pass = true;
  std::size_t instances = 0;
  std::size_t skipped = 0;  // side condition violated
  std::string counterexample;
};

struct AxiomReport {
  std::vector<AxiomResult> axioms;
  bool all_pass() const;  // ignores ax1-as-printed
  const AxiomResult* find(const std::string& name) const;
};

struct AxiomCheckOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  bool include_printed_ax1 = true;
  // Enumerate every element pair when the count of pairs is at most this.
  std::size_t exhaustive_pairs = 0;
};

// ax1 is the normality replacement (box 1 = 1, box distributes over meets);
// ax1-as-printed is the literal inequality, reported separately.
AxiomReport check_axioms(const KripkeSystem& k, int width, const AxiomCheckOptions& opts);
std::vector<std::string> axiom_names();

// ---------------------------------------------------------------------------
// Enumeration of small systems

struct FrameFlags {
  bool serial = false;
  bool reflexive = false;
  bool transitive = false;
};

bool frame_has(const std::vector<std::vector<bool>>& access, const FrameFlags& flags);

// All systems with 1..max_worlds worlds and domains of size 1..max_domain,
// in a fixed order (world count, domain size, relation bits, domain
// assignment).  Stops early when fn returns false.
void for_each_system(int max_worlds, int max_domain, const FrameFlags& flags,
                     const std::function<bool(const KripkeSystem&)>& fn);
std::size_t count_systems(int max_worlds, int max_domain, const FrameFlags& flags);
KripkeSystem random_system(std::mt19937_64& rng, int max_worlds, int max_domain, const FrameFlags& flags = {});

// Uniform integer in [0, n).
std::size_t uniform(std::mt19937_64& rng, std::size_t n);

}  // namespace msa
