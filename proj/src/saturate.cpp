#include "msa/saturate.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "msa/interp.hpp"
#include "msa/transform.hpp"

namespace msa {

namespace {

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < t.arity(); ++k) n += term_size(t.arg(k));
  return n;
}

bool size_less(const Term& a, const Term& b) {
  const auto sa = term_size(a), sb = term_size(b);
  return sa != sb ? sa < sb : a < b;
}

bool vocabulary_within(const Term& t, const std::set<std::string>& vocab) {
  for (const auto& g : generators(t)) {
    if (!vocab.count(g)) return false;
  }
  return true;
}

void subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  for (std::size_t k = 0; k < t.arity(); ++k) subterms(t.arg(k), out);
}

std::set<std::string> intersect(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool holds(const std::vector<Term>& gamma, const std::vector<Term>& delta, const SaturationConfig& cfg) {
  ProverOptions po = cfg.prover;
  po.record_proof = false;
  po.minimize = false;
  return consequence(gamma, delta, cfg.logic, cfg.domain_bound, cfg.sig, po).holds;
}

IndexSet indices_of(const std::vector<Term>& ts, const Signature& sig) {
  IndexSet out;
  for (const Term& t : ts) {
    out.merge(mentioned_indices(t));
    for (const auto& g : generators(t)) {
      if (sig.declared(g)) {
        const IndexSet& d = sig.dims(g);
        out.insert(d.begin(), d.end());
      }
    }
  }
  return out;
}

// Body of a dia term.
Term dia_body(const Term& t) { return t.arg().arg().arg(); }

int modal_depth(const Term& t) {
  int d = 0;
  for (std::size_t k = 0; k < t.arity(); ++k) d = std::max(d, modal_depth(t.arg(k)));
  return d + (t.op() == Op::Box ? 1 : 0);
}

}  // namespace

bool TheoryPair::in_theory(const Term& a, const SaturationConfig& cfg) const { return holds(theory, {a}, cfg); }

bool TheoryPair::in_cotheory(const Term& b, const SaturationConfig& cfg) const {
  return holds({b}, cotheory, cfg);
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Term> enumerate_terms(const std::set<std::string>& vocab, const IndexSet& indices, int depth,
                                  const Signature& sig, std::size_t limit) {
  std::vector<std::vector<Term>> levels(1);
  levels[0] = {zero(), one()};
  for (const auto& g : vocab) levels[0].push_back(gen(g));
  const std::size_t level_cap = std::max<std::size_t>(limit * 4, 64);
  auto is_const = [](const Term& t) { return t.op() == Op::Zero || t.op() == Op::One; };
  for (int d = 1; d <= depth; ++d) {
    std::vector<Term> out;
    std::vector<Term> older;
    for (int e = 0; e < d; ++e) older.insert(older.end(), levels[static_cast<std::size_t>(e)].begin(), levels[static_cast<std::size_t>(e)].end());
    for (const Term& t : levels[static_cast<std::size_t>(d - 1)]) {
      if (out.size() >= level_cap) break;
      if (is_const(t)) continue;
      if (t.op() != Op::Not) out.push_back(neg(t));
      out.push_back(box(t));
      IndexSet fv = free_indices(t, sig);
      for (Index i : fv) {
        if (indices.count(i)) out.push_back(cyl(i, t));
        for (Index j : indices) {
          if (j != i) out.push_back(subst(i, j, t));
        }
      }
    }
    const auto& last = levels[static_cast<std::size_t>(d - 1)];
    for (std::size_t a = 0; a < last.size() && out.size() < level_cap; ++a) {
      if (is_const(last[a])) continue;
      for (const Term& b : older) {
        if (is_const(b) || b == last[a]) continue;
        // Pairs within the last level once.
        auto pos = std::find(last.begin(), last.end(), b);
        if (pos != last.end() && static_cast<std::size_t>(pos - last.begin()) < a) continue;
        Term x = last[a] < b ? last[a] : b, y = last[a] < b ? b : last[a];
        out.push_back(lor(x, y));
        out.push_back(land(x, y));
      }
    }
    std::sort(out.begin(), out.end(), size_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > level_cap) out.resize(level_cap);
    levels.push_back(std::move(out));
  }
  std::vector<Term> all;
  for (const auto& l : levels) all.insert(all.end(), l.begin(), l.end());
  std::stable_sort(all.begin(), all.end(), [](const Term& a, const Term& b) { return term_size(a) < term_size(b); });
  if (all.size() > limit) all.resize(limit);
  return all;
}

// ---------------------------------------------------------------------------
// Separability

std::optional<Separation> separable(const std::vector<Term>& gamma, const std::vector<Term>& delta,
                                    const std::set<std::string>& common, const SaturationConfig& cfg,
                                    bool enumerate) {
  if (!holds(gamma, delta, cfg)) return std::nullopt;

  auto by_enumeration = [&]() -> std::optional<Separation> {
    std::vector<Term> all = gamma;
    all.insert(all.end(), delta.begin(), delta.end());
    for (const Term& c : enumerate_terms(common, indices_of(all, cfg.sig), cfg.depth, cfg.sig, cfg.candidate_limit)) {
      if (holds(gamma, {c}, cfg) && holds({c}, delta, cfg)) return Separation{c, "enumeration"};
    }
    return std::nullopt;
  };
  auto by_interpolant = [&]() -> std::optional<Separation> {
    InterpolationProblem p;
    p.logic = cfg.logic;
    p.sig = cfg.sig;
    p.left = conj(gamma);
    p.right = disj(delta);
    p.x1 = generators(p.left);
    p.x1.insert(common.begin(), common.end());
    p.x2 = generators(p.right);
    p.x2.insert(common.begin(), common.end());
    try {
      InterpolationResult r = interpolate(p, cfg.domain_bound, cfg.prover);
      if (!r.reabstracted || !vocabulary_within(r.interpolant, common)) return std::nullopt;
      InterpolantCheck c = verify_interpolant(p, r.interpolant, cfg.domain_bound, cfg.prover);
      if (c.left_ok && c.right_ok) return Separation{r.interpolant, "interpolant"};
    } catch (const NotDerivable&) {
    }
    return std::nullopt;
  };
  if (enumerate) {
    if (auto s = by_enumeration()) return s;
    return by_interpolant();
  }
  if (auto s = by_interpolant()) return s;
  return by_enumeration();
}

// ---------------------------------------------------------------------------
// Saturation

TheoryPair saturate(const std::vector<Term>& gamma, const std::vector<Term>& delta, const std::set<std::string>& x1,
                    const std::set<std::string>& x2, const SaturationConfig& cfg, IndexSupply& supply) {
  for (const Term& t : gamma) {
    if (!vocabulary_within(t, x1)) throw Error("theory side uses generators outside X1: " + pretty(t));
  }
  for (const Term& t : delta) {
    if (!vocabulary_within(t, x2)) throw Error("cotheory side uses generators outside X2: " + pretty(t));
  }
  const std::set<std::string> common = intersect(x1, x2);
  if (auto s = separable(gamma, delta, common, cfg, false)) {
    throw SeparableInput("input pair is separable by " + pretty(s->witness));
  }

  TheoryPair pair;
  pair.theory = gamma;
  pair.cotheory = delta;

  std::vector<Term> input = gamma;
  input.insert(input.end(), delta.begin(), delta.end());
  IndexSet seen = indices_of(input, cfg.sig);
  const IndexSet enum_indices = seen;

  auto sequence = [&](const std::set<std::string>& vocab) {
    std::set<Term> subs;
    for (const Term& t : input) subterms(t, subs);
    std::vector<Term> seeds;
    for (const Term& t : subs) {
      if (vocabulary_within(t, vocab)) seeds.push_back(t);
    }
    std::sort(seeds.begin(), seeds.end(), size_less);
    for (const Term& t : enumerate_terms(vocab, enum_indices, cfg.depth, cfg.sig, cfg.enumeration_limit)) {
      if (std::find(seeds.begin(), seeds.end(), t) == seeds.end()) seeds.push_back(t);
    }
    return seeds;
  };
  const std::vector<Term> as = sequence(x1);
  const std::vector<Term> bs = sequence(x2);
  const std::size_t n_steps = cfg.steps ? cfg.steps : std::max(as.size(), bs.size());

  std::set<Term> witnessed;
  auto contains = [](const std::vector<Term>& v, const Term& t) { return std::find(v.begin(), v.end(), t) != v.end(); };
  auto fresh = [&](const Term& t) {
    seen.merge(mentioned_indices(t));
    Index i = supply.fresh(seen);
    seen.insert(i);
    return i;
  };

  std::size_t step = 0;
  for (std::size_t n = 0; n < n_steps; ++n) {
    if (n < as.size()) {
      const Term& a = as[n];
      TraceEntry e;
      e.step = ++step;
      e.side = 'T';
      e.term = a;
      seen.merge(mentioned_indices(a));
      std::vector<Term> trial = pair.theory;
      if (!contains(trial, a)) trial.push_back(a);
      if (auto s = separable(trial, pair.cotheory, common, cfg, false)) {
        e.action = "skip-separable";
        e.separator = s->witness;
      } else {
        pair.theory = std::move(trial);
        e.action = "add";
        if (a.op() == Op::Cyl) {
          if (witnessed.count(a)) {
            e.action = "already-witnessed";
          } else {
            Index i = fresh(a);
            Term w = subst(a.index(), i, a.arg());
            pair.theory.push_back(w);
            witnessed.insert(a);
            e.action = "add-witness";
            e.witness_index = i;
            e.witness = w;
          }
        }
      }
      pair.log.push_back(std::move(e));
    }
    if (n < bs.size()) {
      const Term& b = bs[n];
      TraceEntry e;
      e.step = ++step;
      e.side = 'F';
      e.term = b;
      seen.merge(mentioned_indices(b));
      std::vector<Term> trial = pair.cotheory;
      if (!contains(trial, b)) trial.push_back(b);
      if (auto s = separable(pair.theory, trial, common, cfg, false)) {
        e.action = "skip-separable";
        e.separator = s->witness;
      } else {
        pair.cotheory = std::move(trial);
        e.action = "add";
        if (is_qall(b)) {
          if (witnessed.count(b)) {
            e.action = "already-witnessed";
          } else {
            const Index k = b.arg().index();
            Index j = fresh(b);
            Term w = subst(k, j, b.arg().arg().arg());
            pair.cotheory.push_back(w);
            witnessed.insert(b);
            e.action = "add-witness";
            e.witness_index = j;
            e.witness = w;
          }
        }
      }
      pair.log.push_back(std::move(e));
    }
  }
  pair.dilation_level = supply.next();
  return pair;
}

// ---------------------------------------------------------------------------
// Saturation conditions

bool SaturationReport::pass(int condition) const {
  for (const auto& c : conditions) {
    if (c.condition == condition) return c.pass;
  }
  return false;
}

bool SaturationReport::all() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionCheck& c) { return c.pass; });
}

std::vector<Term> trace_universe(const TheoryPair& pair) {
  std::set<Term> out;
  for (const Term& t : pair.theory) subterms(t, out);
  for (const Term& t : pair.cotheory) subterms(t, out);
  for (const auto& e : pair.log) {
    subterms(e.term, out);
    if (e.witness) subterms(*e.witness, out);
  }
  std::vector<Term> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), size_less);
  return v;
}

SaturationReport check_saturated(const TheoryPair& pair, const std::vector<Term>& universe,
                                 const std::set<std::string>& x1, const std::set<std::string>& x2,
                                 const SaturationConfig& cfg) {
  SaturationReport rep;
  const std::set<std::string> common = intersect(x1, x2);
  std::vector<Term> everything = pair.theory;
  everything.insert(everything.end(), pair.cotheory.begin(), pair.cotheory.end());
  everything.insert(everything.end(), universe.begin(), universe.end());
  IndexSet js = indices_of(everything, cfg.sig);
  const Index top = js.empty() ? 0 : *js.rbegin() + 1;
  for (Index j = 0; j <= top; ++j) js.insert(j);

  auto fail = [](ConditionCheck& c, const std::string& why) {
    if (c.pass) c.detail = why;
    c.pass = false;
  };

  ConditionCheck c1{1, true, 0, ""};
  for (const Term& t : pair.theory) {
    ++c1.checked;
    if (!vocabulary_within(t, x1)) fail(c1, "theory member outside Sg X1: " + pretty(t));
  }
  for (const Term& t : pair.cotheory) {
    ++c1.checked;
    if (!vocabulary_within(t, x2)) fail(c1, "cotheory member outside Sg X2: " + pretty(t));
  }
  rep.conditions.push_back(c1);

  ConditionCheck c2{2, true, 1, ""};
  if (auto s = separable(pair.theory, pair.cotheory, common, cfg, false)) {
    fail(c2, "separated by " + pretty(s->witness));
  }
  rep.conditions.push_back(c2);

  ConditionCheck c3{3, true, 0, ""}, c4{4, true, 0, ""}, c5{5, true, 0, ""}, c6{6, true, 0, ""};
  for (const Term& t : universe) {
    const bool in1 = vocabulary_within(t, x1), in2 = vocabulary_within(t, x2);
    if (in1 && t.op() == Op::Or && pair.in_theory(t, cfg)) {
      ++c3.checked;
      if (!pair.in_theory(t.arg(0), cfg) && !pair.in_theory(t.arg(1), cfg)) {
        fail(c3, pretty(t) + " in T but neither disjunct");
      }
    }
    if (in1 && t.op() == Op::Cyl && pair.in_theory(t, cfg)) {
      ++c4.checked;
      const Term& x = t.arg();
      IndexSet fv = free_indices(x, cfg.sig);
      bool found = false;
      for (Index j : js) {
        if (fv.count(j) && j != t.index()) continue;
        if (pair.in_theory(subst(t.index(), j, x), cfg)) {
          found = true;
          break;
        }
      }
      if (!found) fail(c4, pretty(t) + " in T without a witness");
    }
    if (in2 && t.op() == Op::And && pair.in_cotheory(t, cfg)) {
      ++c5.checked;
      if (!pair.in_cotheory(t.arg(0), cfg) && !pair.in_cotheory(t.arg(1), cfg)) {
        fail(c5, pretty(t) + " in F but neither conjunct");
      }
    }
    if (in2 && is_qall(t) && pair.in_cotheory(t, cfg)) {
      ++c6.checked;
      const Index k = t.arg().index();
      const Term x = t.arg().arg().arg();
      IndexSet fv = free_indices(x, cfg.sig);
      bool found = false;
      for (Index j : js) {
        if (fv.count(j) && j != k) continue;
        if (pair.in_cotheory(subst(k, j, x), cfg)) {
          found = true;
          break;
        }
      }
      if (!found) fail(c6, pretty(t) + " in F without a witness");
    }
  }
  rep.conditions.push_back(c3);
  rep.conditions.push_back(c4);
  rep.conditions.push_back(c5);
  rep.conditions.push_back(c6);
  return rep;
}

// ---------------------------------------------------------------------------
// Modal witnesses

std::vector<ModalChild> modal_witness_step(const TheoryPair& pair, const std::set<std::string>& x1,
                                           const std::set<std::string>& x2, const SaturationConfig& cfg,
                                           IndexSupply& supply) {
  std::vector<Term> boxed, dia_theory, dia_cotheory, boxed_cotheory;
  for (const Term& t : pair.theory) {
    if (t.op() == Op::Box) {
      boxed.push_back(t.arg());
      if (cfg.logic.transitive) boxed.push_back(t);
    }
    if (is_dia(t)) dia_theory.push_back(dia_body(t));
  }
  for (const Term& t : pair.cotheory) {
    if (is_dia(t)) {
      dia_cotheory.push_back(dia_body(t));
      if (cfg.logic.transitive) dia_cotheory.push_back(t);
    }
    if (t.op() == Op::Box) boxed_cotheory.push_back(t.arg());
  }
  auto dedupe = [](std::vector<Term> v) {
    std::vector<Term> out;
    for (const Term& t : v) {
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    return out;
  };

  const std::set<std::string> common = intersect(x1, x2);
  std::vector<ModalChild> out;
  auto make = [&](std::string origin, std::vector<Term> th, std::vector<Term> co) {
    th = dedupe(std::move(th));
    co = dedupe(std::move(co));
    for (const auto& c : out) {
      if (c.start_theory == th && c.start_cotheory == co) return;
    }
    ModalChild child;
    child.origin = std::move(origin);
    child.start_theory = th;
    child.start_cotheory = co;
    if (auto s = separable(th, co, common, cfg, false)) {
      child.claim_holds = false;
      child.separator = s->witness;
    } else {
      child.pair = saturate(th, co, x1, x2, cfg, supply);
    }
    out.push_back(std::move(child));
  };
  for (const Term& a : dia_theory) {
    std::vector<Term> th{a};
    th.insert(th.end(), boxed.begin(), boxed.end());
    make("dia " + pretty(a), th, dia_cotheory);
  }
  // In serial logics dia 1 is a theorem, so every pair has a successor.
  if (cfg.logic.serial) make("dia T", boxed, dia_cotheory);
  for (const Term& b : boxed_cotheory) {
    std::vector<Term> co{b};
    co.insert(co.end(), dia_cotheory.begin(), dia_cotheory.end());
    make("box " + pretty(b), boxed, co);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Countermodel

namespace {

class ModelBuilder {
 public:
  ModelBuilder(const std::vector<Term>& gamma, const std::vector<Term>& delta, const std::set<std::string>& x1,
               const std::set<std::string>& x2, const SaturationConfig& cfg)
      : gamma_(gamma), delta_(delta), x1_(x1), x2_(x2), cfg_(cfg) {
    std::vector<Term> all = gamma;
    all.insert(all.end(), delta.begin(), delta.end());
    width_ = required_width(all, cfg.sig);
    for (const Term& t : all) gens_.merge(generators(t));
  }

  int width() const { return width_; }

  bool member(std::size_t w, const Term& t, bool theory_side) {
    auto key = std::make_tuple(w, t, theory_side);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const TheoryPair& p = (*worlds_)[w];
    bool v = theory_side ? p.in_theory(t, cfg_) : p.in_cotheory(t, cfg_);
    memo_.emplace(key, v);
    return v;
  }

  void set_worlds(const std::vector<TheoryPair>* worlds) { worlds_ = worlds; }

  // s_y g for the values `vals` at the declared coordinates of g.
  Term instance(const std::string& g, const std::vector<int>& vals) const {
    const IndexSet& dims = cfg_.sig.dims(g);
    std::map<Index, Index> sigma;
    IndexSet avoid = dims;
    auto d = dims.begin();
    for (int v : vals) {
      sigma[*d++] = v;
      avoid.insert(v);
    }
    return apply_chain(chain_for(FiniteTransformation(sigma), avoid), gen(g));
  }

  bool psi(std::size_t w, const std::string& g, const std::vector<int>& vals) {
    Term t = instance(g, vals);
    if (x1_.count(g)) return member(w, t, true);
    return member(w, neg(t), false);
  }

  bool psi2(std::size_t w, const std::string& g, const std::vector<int>& vals) {
    return member(w, neg(instance(g, vals)), false);
  }

  struct Built {
    KripkeSystem system;
    Valuation valuation;
    std::vector<int> tuple;
    std::vector<ReportLine> report;
    bool pass = false;
  };

  Built build(const std::vector<std::size_t>& keep, const std::vector<std::vector<bool>>& access) {
    Built b;
    const std::size_t n = keep.size();
    KripkeSystem& k = b.system;
    int max_size = 1;
    std::vector<int> sizes(n);
    for (std::size_t a = 0; a < n; ++a) {
      const TheoryPair& p = (*worlds_)[keep[a]];
      int level = std::max<int>(static_cast<int>(p.dilation_level), width_);
      sizes[a] = std::max(1, std::min(level, cfg_.domain_bound));
      max_size = std::max(max_size, sizes[a]);
      k.worlds.push_back("w" + std::to_string(keep[a]));
    }
    for (int e = 0; e < max_size; ++e) k.domain.push_back("i" + std::to_string(e));
    k.access.assign(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t c = 0; c < n; ++c) k.access[a][c] = access[keep[a]][keep[c]];
      std::vector<int> dom;
      for (int e = 0; e < sizes[a]; ++e) dom.push_back(e);
      k.world_domain.push_back(dom);
    }
    SpacePtr space = make_space(k, width_);
    for (const auto& g : gens_) {
      b.valuation[g] = element_from(space, cfg_.sig.dims(g), [&](std::size_t w, const std::vector<int>& vals) {
        return psi(keep[w], g, vals);
      });
    }
    b.tuple.assign(static_cast<std::size_t>(width_), 0);
    for (int i = 0; i < width_; ++i) b.tuple[static_cast<std::size_t>(i)] = std::min(i, sizes[0] - 1);
    const std::size_t x = space->encode(b.tuple);
    b.pass = true;
    for (const Term& t : gamma_) {
      bool v = eval(t, space, b.valuation).at(0, x);
      b.report.push_back({t, true, v});
      b.pass = b.pass && v;
    }
    for (const Term& t : delta_) {
      bool v = eval(t, space, b.valuation).at(0, x);
      b.report.push_back({t, false, v});
      b.pass = b.pass && !v;
    }
    return b;
  }

  const std::set<std::string>& gens() const { return gens_; }

 private:
  const std::vector<Term>& gamma_;
  const std::vector<Term>& delta_;
  const std::set<std::string>& x1_;
  const std::set<std::string>& x2_;
  const SaturationConfig& cfg_;
  int width_ = 0;
  std::set<std::string> gens_;
  const std::vector<TheoryPair>* worlds_ = nullptr;
  std::map<std::tuple<std::size_t, Term, bool>, bool> memo_;
};

void close_relation(std::vector<std::vector<bool>>& r, const Logic& logic) {
  const std::size_t n = r.size();
  if (logic.reflexive) {
    for (std::size_t w = 0; w < n; ++w) r[w][w] = true;
  }
  if (logic.transitive) {
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t a = 0; a < n; ++a)
        if (r[a][m])
          for (std::size_t b = 0; b < n; ++b)
            if (r[m][b]) r[a][b] = true;
  }
  if (logic.serial) {
    for (std::size_t w = 0; w < n; ++w) {
      if (std::none_of(r[w].begin(), r[w].end(), [](bool e) { return e; })) r[w][w] = true;
    }
  }
}

}  // namespace

Countermodel build_countermodel(const std::vector<Term>& gamma, const std::vector<Term>& delta,
                                const std::set<std::string>& x1, const std::set<std::string>& x2,
                                const SaturationConfig& cfg, IndexSupply& supply) {
  Countermodel cm;
  ModelBuilder mb(gamma, delta, x1, x2, cfg);
  cm.width = mb.width();
  {
    IndexSet below;
    for (Index i = 0; i < cm.width; ++i) below.insert(i);
    supply.reserve(below);
  }

  int depth_bound = cfg.world_depth;
  if (depth_bound < 0) {
    depth_bound = 0;
    for (const Term& t : gamma) depth_bound = std::max(depth_bound, modal_depth(t));
    for (const Term& t : delta) depth_bound = std::max(depth_bound, modal_depth(t));
  }

  std::vector<TheoryPair> worlds;
  std::vector<int> depth;
  worlds.push_back(saturate(gamma, delta, x1, x2, cfg, supply));
  depth.push_back(0);
  std::map<std::pair<std::vector<Term>, std::vector<Term>>, std::size_t> by_start;
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    if (depth[w] >= depth_bound) continue;
    for (ModalChild& child : modal_witness_step(worlds[w], x1, x2, cfg, supply)) {
      if (!child.claim_holds) {
        cm.findings.push_back("claim violation at w" + std::to_string(w) + " (" + child.origin + "): separated by " +
                              pretty(*child.separator));
        continue;
      }
      auto key = std::make_pair(child.start_theory, child.start_cotheory);
      if (by_start.count(key)) continue;
      if (worlds.size() >= cfg.max_worlds) {
        cm.findings.push_back("world limit reached");
        break;
      }
      child.pair->stage = worlds.size();
      by_start.emplace(key, worlds.size());
      worlds.push_back(std::move(*child.pair));
      depth.push_back(depth[w] + 1);
    }
  }

  mb.set_worlds(&worlds);
  const std::size_t n = worlds.size();
  std::vector<std::vector<bool>> access(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (worlds[u].dilation_level > worlds[v].dilation_level) continue;
      bool ok = true;
      for (const Term& t : worlds[u].theory) {
        if (ok && t.op() == Op::Box) ok = mb.member(v, t.arg(), true);
      }
      for (const Term& t : worlds[u].cotheory) {
        if (ok && is_dia(t)) ok = mb.member(v, dia_body(t), false);
      }
      access[u][v] = ok;
    }
  }
  close_relation(access, cfg.logic);

  std::vector<std::size_t> keep(n);
  for (std::size_t w = 0; w < n; ++w) keep[w] = w;
  auto built = mb.build(keep, access);

  if (cfg.prune && built.pass) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = keep.size(); k-- > 1;) {
        std::vector<std::size_t> trial = keep;
        trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
        auto b = mb.build(trial, access);
        if (b.pass && validate_system(b.system).empty() && frame_has(b.system.access, cfg.logic.flags())) {
          keep = std::move(trial);
          built = std::move(b);
          ++cm.pruned;
          changed = true;
          break;
        }
      }
    }
  }

  for (const auto& problem : validate_system(built.system)) cm.findings.push_back("system: " + problem);
  if (!frame_has(built.system.access, cfg.logic.flags())) cm.findings.push_back("frame lacks the logic's properties");
  for (const auto& [g, e] : built.valuation) {
    if (!monotone_check(built.system, e)) cm.findings.push_back("psi image of " + g + " is not monotone");
  }
  // psi1 and psi2 on the shared generators.
  SpacePtr space = make_space(built.system, cm.width);
  for (const auto& g : mb.gens()) {
    if (!x1.count(g) || !x2.count(g)) continue;
    std::size_t disagree = 0;
    for (std::size_t w = 0; w < keep.size(); ++w) {
      for (std::size_t x = 0; x < space->tuples(); ++x) {
        if (!space->valid(w, x)) continue;
        std::vector<int> tuple = space->decode(x);
        std::vector<int> vals;
        for (Index i : cfg.sig.dims(g)) vals.push_back(tuple[static_cast<std::size_t>(i)]);
        if (mb.psi(keep[w], g, vals) != mb.psi2(keep[w], g, vals)) ++disagree;
      }
    }
    if (disagree) cm.findings.push_back("psi1 and psi2 disagree on " + g + " at " + std::to_string(disagree) + " points");
  }

  cm.system = std::move(built.system);
  cm.valuation = std::move(built.valuation);
  cm.tuple = std::move(built.tuple);
  cm.report = std::move(built.report);
  cm.pass = built.pass;
  cm.world = 0;
  for (std::size_t w : keep) cm.worlds.push_back(worlds[w]);
  return cm;
}

std::string trace_to_json(const TheoryPair& pair) {
  nlohmann::json doc;
  doc["stage"] = pair.stage;
  doc["dilation_level"] = pair.dilation_level;
  doc["theory"] = nlohmann::json::array();
  for (const Term& t : pair.theory) doc["theory"].push_back(print(t));
  doc["cotheory"] = nlohmann::json::array();
  for (const Term& t : pair.cotheory) doc["cotheory"].push_back(print(t));
  doc["trace"] = nlohmann::json::array();
  for (const auto& e : pair.log) {
    nlohmann::json j;
    j["step"] = e.step;
    j["side"] = std::string(1, e.side);
    j["term"] = print(e.term);
    j["action"] = e.action;
    j["separable"] = e.action == "skip-separable";
    if (e.witness_index) j["witness_index"] = *e.witness_index;
    if (e.witness) j["witness"] = print(*e.witness);
    if (e.separator) j["separator"] = print(*e.separator);
    doc["trace"].push_back(j);
  }
  return doc.dump();
}

std::vector<SeedPair> load_seed_pairs(std::string_view json_text) {
  std::vector<SeedPair> out;
  try {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    const std::string default_sig = doc.value("signature", std::string());
    for (const auto& rec : doc.at("seeds")) {
      SeedPair s;
      s.name = rec.value("name", "seed-" + std::to_string(out.size()));
      s.logic = logic_from_name(rec.at("logic").get<std::string>());
      s.sig = parse_signature(rec.value("signature", default_sig));
      for (const auto& t : rec.at("gamma")) s.gamma.push_back(parse(t.get<std::string>(), s.sig));
      for (const auto& t : rec.at("delta")) s.delta.push_back(parse(t.get<std::string>(), s.sig));
      if (rec.contains("X1")) {
        for (const auto& g : rec.at("X1")) s.x1.insert(g.get<std::string>());
      } else {
        for (const Term& t : s.gamma) s.x1.merge(generators(t));
      }
      if (rec.contains("X2")) {
        for (const auto& g : rec.at("X2")) s.x2.insert(g.get<std::string>());
      } else {
        for (const Term& t : s.delta) s.x2.merge(generators(t));
      }
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("seeds: ") + e.what());
  }
  return out;
}

std::vector<SeedPair> load_seed_pairs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_seed_pairs(buf.str());
}

}  // namespace msa
