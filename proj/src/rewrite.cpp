#include "msa/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace msa {

const std::vector<Rule>& rule_set() {
  static const std::vector<Rule> rules{
      {"not-const", "Boolean", "negation of 0 or 1"},
      {"double-neg", "Boolean", "not not t -> t"},
      {"de-morgan", "Boolean", "negation pushed below or/and"},
      {"ac", "Boolean", "or/and flattened, sorted, duplicates dropped"},
      {"unit", "Boolean", "0 dropped from joins, 1 from meets"},
      {"absorb", "Boolean", "join with 1 is 1, meet with 0 is 0"},
      {"complement", "Boolean", "t and not t in one join or meet"},
      {"box-top", "ax1", "box 1 -> 1 (normality)"},
      {"box-meet", "ax1", "box distributes over meets (normality)"},
      {"cyl-vacuous", "ax2, ax3, ax4", "c_i t -> t when i is not free in t"},
      {"cyl-join", "ax5", "c_i distributes over joins"},
      {"cyl-meet", "ax4", "conjuncts without i move out of c_i"},
      {"cyl-sort", "ax6", "adjacent c's in ascending index order"},
      {"subst-vacuous", "ax7, ax9", "substitution chain acting trivially on the free indices dropped"},
      {"subst-bool", "ax8, T5-4(i)", "substitution pushed below not/or/and"},
      {"subst-box", "modal", "substitution pushed below box"},
      {"subst-cyl", "ax11", "substitution pushed below c_k when k is not a target"},
      {"subst-chain", "ax12-ax14, L1-L7", "maximal chain replaced by a canonical chain with the same action"},
  };
  return rules;
}

namespace {

class Normalizer {
 public:
  Normalizer(const Signature& sig, const NormalizeOptions& opts, NormalizeStats* stats)
      : sig_(sig), opts_(opts), stats_(stats) {}

  Term pass(const Term& t) {
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    Term out;
    switch (t.op()) {
      case Op::Zero:
      case Op::One:
      case Op::Gen: out = t; break;
      case Op::Not: out = mk_not(pass(t.arg())); break;
      case Op::Or:
      case Op::And: {
        Term a = pass(t.arg(0));
        out = mk_junction(t.op(), {a, pass(t.arg(1))});
        break;
      }
      case Op::Box: out = mk_box(pass(t.arg())); break;
      case Op::Cyl: out = mk_cyl(t.index(), pass(t.arg())); break;
      case Op::Subst: {
        Term a = pass(t.arg());
        out = subst_any(FiniteTransformation::replacement(t.over(), t.from()), a);
        break;
      }
    }
    memo_.emplace(t, out);
    return out;
  }

  void new_pass() { memo_.clear(); }

 private:
  void fire(const char* rule) {
    if (++steps_ > opts_.step_limit) throw Error("rewrite step limit exceeded");
    if (stats_ != nullptr) ++stats_->fired[rule];
  }

  const IndexSet& fv(const Term& t) {
    if (auto it = fv_.find(t); it != fv_.end()) return it->second;
    return fv_.emplace(t, free_indices(t, sig_)).first->second;
  }

  static void flatten(Op op, const Term& t, std::vector<Term>& out) {
    if (t.op() == op) {
      flatten(op, t.arg(0), out);
      flatten(op, t.arg(1), out);
    } else {
      out.push_back(t);
    }
  }

  Term mk_not(const Term& a) {
    switch (a.op()) {
      case Op::Zero: fire("not-const"); return one();
      case Op::One: fire("not-const"); return zero();
      case Op::Not: fire("double-neg"); return a.arg();
      case Op::Or:
      case Op::And: {
        fire("de-morgan");
        std::vector<Term> parts;
        flatten(a.op(), a, parts);
        for (Term& p : parts) p = mk_not(p);
        return mk_junction(a.op() == Op::Or ? Op::And : Op::Or, parts);
      }
      default: return neg(a);
    }
  }

  Term mk_junction(Op op, const std::vector<Term>& input) {
    const Op unit = op == Op::Or ? Op::Zero : Op::One;
    const Op absorbing = op == Op::Or ? Op::One : Op::Zero;
    std::vector<Term> flat;
    for (const Term& t : input) flatten(op, t, flat);
    std::vector<Term> parts;
    for (const Term& t : flat) {
      if (t.op() == absorbing) {
        fire("absorb");
        return absorbing == Op::One ? one() : zero();
      }
      if (t.op() == unit) {
        fire("unit");
        continue;
      }
      parts.push_back(t);
    }
    std::vector<Term> sorted = parts;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted != parts) fire("ac");
    for (const Term& t : sorted) {
      if (t.op() == Op::Not && std::binary_search(sorted.begin(), sorted.end(), t.arg())) {
        fire("complement");
        return absorbing == Op::One ? one() : zero();
      }
    }
    if (sorted.empty()) return unit == Op::One ? one() : zero();
    Term out = sorted.back();
    for (std::size_t k = sorted.size() - 1; k-- > 0;) {
      out = op == Op::Or ? lor(sorted[k], out) : land(sorted[k], out);
    }
    return out;
  }

  Term mk_box(const Term& a) {
    if (a.op() == Op::One) {
      fire("box-top");
      return one();
    }
    if (a.op() == Op::And) {
      fire("box-meet");
      std::vector<Term> parts;
      flatten(Op::And, a, parts);
      for (Term& p : parts) p = mk_box(p);
      return mk_junction(Op::And, parts);
    }
    return box(a);
  }

  Term mk_cyl(Index i, const Term& a) {
    if (fv(a).count(i) == 0) {
      fire("cyl-vacuous");
      return a;
    }
    if (a.op() == Op::Or) {
      fire("cyl-join");
      std::vector<Term> parts;
      flatten(Op::Or, a, parts);
      for (Term& p : parts) p = mk_cyl(i, p);
      return mk_junction(Op::Or, parts);
    }
    if (a.op() == Op::And) {
      std::vector<Term> parts;
      flatten(Op::And, a, parts);
      std::vector<Term> with;
      std::vector<Term> without;
      for (const Term& p : parts) (fv(p).count(i) != 0 ? with : without).push_back(p);
      if (!without.empty()) {
        fire("cyl-meet");
        without.push_back(mk_cyl(i, mk_junction(Op::And, with)));
        return mk_junction(Op::And, without);
      }
    }
    if (a.op() == Op::Cyl && a.index() < i) {
      fire("cyl-sort");
      return mk_cyl(a.index(), mk_cyl(i, a.arg()));
    }
    return cyl(i, a);
  }

  // Applies the action tau (evaluate at x o tau) to a normalized term.
  Term subst_any(const FiniteTransformation& tau, const Term& t) {
    SubstChain inner;
    Term base = t;
    while (base.op() == Op::Subst) {
      inner.push_back({base.over(), base.from()});
      base = base.arg();
    }
    return mk_subst(compose(tau, chain_action(inner)), base, t);
  }

  // `original` is the term being rewritten, used to tell whether anything changed.
  Term mk_subst(const FiniteTransformation& tau, const Term& base, const Term& original) {
    FiniteTransformation act = tau.restricted(fv(base));
    if (act.is_identity()) {
      if (!original.same_node(base)) fire("subst-vacuous");
      return base;
    }
    switch (base.op()) {
      case Op::Not: fire("subst-bool"); return mk_not(subst_any(act, base.arg()));
      case Op::Or:
      case Op::And: {
        fire("subst-bool");
        std::vector<Term> parts;
        flatten(base.op(), base, parts);
        for (Term& p : parts) p = subst_any(act, p);
        return mk_junction(base.op(), parts);
      }
      case Op::Box: fire("subst-box"); return mk_box(subst_any(act, base.arg()));
      case Op::Cyl: {
        const Index k = base.index();
        bool captured = false;
        for (const auto& [from, to] : act.entries()) captured = captured || to == k;
        if (!captured) {
          fire("subst-cyl");
          return mk_cyl(k, subst_any(act, base.arg()));
        }
        break;
      }
      default: break;
    }
    Term out = apply_chain(chain_for(act, fv(base)), base);
    if (out != original) fire("subst-chain");
    return out;
  }

  const Signature& sig_;
  const NormalizeOptions& opts_;
  NormalizeStats* stats_;
  std::size_t steps_ = 0;
  std::unordered_map<Term, Term, TermHash> memo_;
  std::unordered_map<Term, IndexSet, TermHash> fv_;
};

}  // namespace

Term normalize(const Term& t, const Signature& sig, const NormalizeOptions& opts, NormalizeStats* stats) {
  free_indices(t, sig);  // undeclared generators fail here
  Normalizer n(sig, opts, stats);
  Term cur = t;
  for (std::size_t pass = 1; pass <= 64; ++pass) {
    n.new_pass();
    Term next = n.pass(cur);
    if (stats != nullptr) stats->passes = pass;
    if (next == cur) return cur;
    cur = next;
  }
  throw Error("rewrite pass limit exceeded");
}

// ---------------------------------------------------------------------------
// Bounded semantic equality

namespace {

struct SystemKey {
  int worlds, domain, width;
  bool serial, reflexive, transitive;
  auto operator<=>(const SystemKey&) const = default;
};

const std::vector<SpacePtr>& spaces_for(const Bounds& b, int width, const FrameFlags& f) {
  static std::mutex mu;
  static std::map<SystemKey, std::vector<SpacePtr>> cache;
  std::lock_guard<std::mutex> lock(mu);
  SystemKey key{b.max_worlds, b.max_domain, width, f.serial, f.reflexive, f.transitive};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<SpacePtr> spaces;
  for_each_system(b.max_worlds, b.max_domain, f, [&](const KripkeSystem& k) {
    spaces.push_back(make_space(k, width));
    return true;
  });
  return cache.emplace(key, std::move(spaces)).first->second;
}

std::size_t valuation_bits(const Space& s, const std::vector<std::pair<std::string, IndexSet>>& gens) {
  std::size_t bits = 0;
  for (const auto& [name, dims] : gens) {
    for (std::size_t w = 0; w < s.worlds(); ++w) {
      std::size_t cells = 1;
      for (std::size_t k = 0; k < dims.size(); ++k) cells *= s.system().world_domain[w].size();
      bits += cells;
    }
  }
  return bits;
}

Valuation make_valuation(const SpacePtr& s, const std::vector<std::pair<std::string, IndexSet>>& gens,
                         const std::function<bool()>& bit) {
  Valuation val;
  for (const auto& [name, dims] : gens) {
    val[name] = element_from(s, dims, [&](std::size_t, const std::vector<int>&) { return bit(); });
  }
  return val;
}

}  // namespace

EqResult eq_at_bound(const Term& t, const Term& u, const Signature& sig, const Bounds& bounds,
                     const EqOptions& opts) {
  if (bounds.max_worlds < 1 || bounds.max_domain < 1 || bounds.max_indices < 0) throw Error("bounds must be positive");
  std::vector<std::pair<std::string, IndexSet>> gens;
  int width = std::max({bounds.max_indices, t.max_index() + 1, u.max_index() + 1});
  std::set<std::string> names = generators(t);
  for (const auto& n : generators(u)) names.insert(n);
  for (const auto& n : names) {
    const IndexSet& dims = sig.dims(n);
    if (!dims.empty()) width = std::max(width, *dims.rbegin() + 1);
    gens.emplace_back(n, dims);
  }

  EqResult res;
  res.width = width;
  const std::vector<SpacePtr>& spaces = spaces_for(bounds, width, opts.frames);
  if (spaces.empty()) return res;

  auto check = [&](const SpacePtr& s, const Valuation& val) {
    ++res.checked;
    std::vector<AlgebraElement> v = eval_all({t, u}, s, val);
    if (v[0] == v[1]) return true;
    for (std::size_t w = 0; w < s->worlds(); ++w) {
      for (std::size_t x = 0; x < s->tuples(); ++x) {
        if (s->valid(w, x) && v[0].at(w, x) != v[1].at(w, x)) {
          res.equal = false;
          res.witness = Witness{s->system(), val, width, w, s->decode(x), v[0].at(w, x)};
          return false;
        }
      }
    }
    return false;
  };

  // Count the exhaustive space, stopping as soon as the budget is passed.
  std::size_t total = 0;
  bool within = true;
  for (const SpacePtr& s : spaces) {
    std::size_t bits = valuation_bits(*s, gens);
    if (bits >= 40 || (std::size_t{1} << bits) > opts.exhaustive_budget - std::min(total, opts.exhaustive_budget)) {
      within = false;
      break;
    }
    total += std::size_t{1} << bits;
  }

  if (within) {
    res.exhaustive = true;
    for (const SpacePtr& s : spaces) {
      const std::size_t bits = valuation_bits(*s, gens);
      for (std::size_t mask = 0; mask < (std::size_t{1} << bits); ++mask) {
        std::size_t pos = 0;
        Valuation val = make_valuation(s, gens, [&] { return ((mask >> pos++) & 1u) != 0; });
        if (!check(s, val)) return res;
      }
    }
    return res;
  }

  std::mt19937_64 rng(opts.seed);
  const std::size_t samples = std::max(opts.samples, spaces.size());
  for (std::size_t n = 0; n < samples; ++n) {
    const SpacePtr& s = spaces[n % spaces.size()];
    Valuation val = make_valuation(s, gens, [&] { return (rng() & 1u) != 0; });
    if (!check(s, val)) return res;
  }
  return res;
}

std::string describe(const Witness& w, const Signature& sig) {
  std::ostringstream out;
  out << "world " << w.system.worlds[w.world] << ", tuple (";
  for (std::size_t k = 0; k < w.tuple.size(); ++k) {
    out << (k ? "," : "") << w.system.domain[static_cast<std::size_t>(w.tuple[k])];
  }
  out << "), left=" << (w.left_value ? 1 : 0) << " right=" << (w.left_value ? 0 : 1) << "; system "
      << to_json(w.system) << "; valuation " << to_json(w.valuation, sig);
  return out.str();
}

// ---------------------------------------------------------------------------
// Identity catalogue

namespace {

using Equation = std::pair<Term, Term>;
using Instance = std::vector<Equation>;

struct Drawer {
  std::mt19937_64& rng;
  const Signature& sig;
  int depth;
  int max_indices;

  Index idx(int n) { return static_cast<Index>(rng() % static_cast<std::uint64_t>(n)); }
  Index idx() { return idx(max_indices); }

  Term term() {
    RandomTermOptions o;
    o.depth = depth;
    o.max_index = max_indices - 1;
    return random_term(rng, sig, o);
  }

  // Transformation moving each index below n with probability 1/2.
  FiniteTransformation transformation(int n) {
    std::map<Index, Index> m;
    for (Index i = 0; i < n; ++i) {
      if (rng() & 1u) m[i] = idx(n);
    }
    return FiniteTransformation(m);
  }

  IndexSet subset(int n) {
    IndexSet s;
    for (Index i = 0; i < n; ++i) {
      if (rng() & 1u) s.insert(i);
    }
    return s;
  }

  // k distinct indices from pool, in random order.
  std::optional<std::vector<Index>> distinct(std::vector<Index> pool, std::size_t k) {
    if (pool.size() < k) return std::nullopt;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(k);
    return pool;
  }
};

Term cyls(const IndexSet& gamma, Term t) {
  for (auto it = gamma.rbegin(); it != gamma.rend(); ++it) t = cyl(*it, t);
  return t;
}

// s^over_from for sequences: s^{over_0}_{from_0} ... s^{over_{k-1}}_{from_{k-1}} t.
Term s_seq(const std::vector<Index>& over, const std::vector<Index>& from, Term t) {
  for (std::size_t m = over.size(); m-- > 0;) t = subst(over[m], from[m], t);
  return t;
}

std::vector<Index> outside(const IndexSet& blocked, int limit) {
  std::vector<Index> pool;
  for (Index i = 0; i < limit; ++i) {
    if (blocked.count(i) == 0) pool.push_back(i);
  }
  return pool;
}

struct IdentityDef {
  std::string name;
  std::string statement;
  std::function<std::optional<Instance>(Drawer&)> draw;
};

const std::vector<IdentityDef>& catalogue() {
  static const std::vector<IdentityDef> defs{
      {"ax1", "box 1 = 1 and box(x and y) = box x and box y",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Term y = d.term();
         return Instance{{box(one()), one()}, {box(land(x, y)), land(box(x), box(y))}};
       }},
      {"ax2", "c_j 0 = 0",
       [](Drawer& d) -> std::optional<Instance> { return Instance{{cyl(d.idx(), zero()), zero()}}; }},
      {"ax3", "x <= c_i x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         return Instance{{lor(x, cyl(i, x)), cyl(i, x)}};
       }},
      {"ax4", "c_i(x and c_i y) = c_i x and c_i y",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Term y = d.term();
         Index i = d.idx();
         return Instance{{cyl(i, land(x, cyl(i, y))), land(cyl(i, x), cyl(i, y))}};
       }},
      {"ax5", "c_i(x or y) = c_i x or c_i y",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Term y = d.term();
         Index i = d.idx();
         return Instance{{cyl(i, lor(x, y)), lor(cyl(i, x), cyl(i, y))}};
       }},
      {"ax6", "c_i c_j x = c_j c_i x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         return Instance{{cyl(i, cyl(j, x)), cyl(j, cyl(i, x))}};
       }},
      {"ax7", "s_i^i x = x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         return Instance{{subst(i, i, x), x}};
       }},
      {"ax8", "s_i^j is a Boolean endomorphism",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Term y = d.term();
         Index i = d.idx();
         Index j = d.idx();
         return Instance{{subst(i, j, lor(x, y)), lor(subst(i, j, x), subst(i, j, y))},
                         {subst(i, j, neg(x)), neg(subst(i, j, x))}};
       }},
      {"ax9", "s_j^i c_i x = c_i x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         return Instance{{subst(i, j, cyl(i, x)), cyl(i, x)}};
       }},
      {"ax10", "c_i s_j^i x = s_j^i x for i != j",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         if (i == j) return std::nullopt;
         return Instance{{cyl(i, subst(i, j, x)), subst(i, j, x)}};
       }},
      {"ax11", "s_j^i c_k x = c_k s_j^i x for k not in {i,j}",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         Index k = d.idx();
         if (k == i || k == j) return std::nullopt;
         return Instance{{subst(i, j, cyl(k, x)), cyl(k, subst(i, j, x))}};
       }},
      {"ax12", "c_i s_i^j x = c_j s_j^i x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         return Instance{{cyl(i, subst(j, i, x)), cyl(j, subst(i, j, x))}};
       }},
      {"ax13", "s_i^j s_k^l x = s_k^l s_i^j x for |{i,j,k,l}| = 4",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         const int n = std::max(d.max_indices, 4);
         Index i = d.idx(n);
         Index j = d.idx(n);
         Index k = d.idx(n);
         Index l = d.idx(n);
         if (IndexSet{i, j, k, l}.size() != 4) return std::nullopt;
         return Instance{{subst(j, i, subst(l, k, x)), subst(l, k, subst(j, i, x))}};
       }},
      {"ax14", "s_i^l s_l^j x = s_i^l s_i^j x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         Index l = d.idx();
         return Instance{{subst(l, i, subst(j, l, x)), subst(l, i, subst(j, i, x))}};
       }},
      {"ax1-as-printed", "box(-x or y) <= (-box x or -box y)",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Term y = d.term();
         Term rhs = lor(neg(box(x)), neg(box(y)));
         return Instance{{lor(box(lor(neg(x), y)), rhs), rhs}};
       }},
      {"L1", "s^i_j s^k_i c_i x = s^k_j c_i x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         Index k = d.idx();
         return Instance{{subst(i, j, subst(k, i, cyl(i, x))), subst(k, j, cyl(i, x))}};
       }},
      {"L2", "s^i_j s^l_i c_i c_k x = s^k_j s^l_k c_i c_k x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         Index k = d.idx();
         Index l = d.idx();
         Term body = cyl(i, cyl(k, x));
         return Instance{{subst(i, j, subst(l, i, body)), subst(k, j, subst(l, k, body))}};
       }},
      {"L3", "s^i_j s^i_l x = s^i_l x for i != l",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         Index l = d.idx();
         if (i == l) return std::nullopt;
         return Instance{{subst(i, j, subst(i, l, x)), subst(i, l, x)}};
       }},
      {"L4", "s^i_j s^j_i x = s^i_j x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         return Instance{{subst(i, j, subst(j, i, x)), subst(i, j, x)}};
       }},
      {"L5", "s_[i|j] x = s^i_j x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Index i = d.idx();
         Index j = d.idx();
         return Instance{{s_tau(FiniteTransformation::replacement(i, j), x, d.sig), subst(i, j, x)}};
       }},
      {"L6", "s^pi_nu s^mu_pi x = s^rho_nu s^mu_rho x (k <= 2)",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         const std::size_t k = 1 + (d.rng() & 1u);
         std::vector<Index> all;
         for (Index i = 0; i < d.max_indices; ++i) all.push_back(i);
         auto mu = d.distinct(all, k);
         if (!mu) return std::nullopt;
         std::vector<Index> nu;
         for (std::size_t m = 0; m < k; ++m) nu.push_back(d.idx());
         IndexSet blocked = free_indices(x, d.sig);
         blocked.insert(mu->begin(), mu->end());
         blocked.insert(nu.begin(), nu.end());
         std::vector<Index> pool = outside(blocked, d.max_indices + 4);
         auto pi = d.distinct(pool, k);
         auto rho = d.distinct(pool, k);
         if (!pi || !rho) return std::nullopt;
         return Instance{{s_seq(*pi, nu, s_seq(*mu, *pi, x)), s_seq(*rho, nu, s_seq(*mu, *rho, x))}};
       }},
      {"L7", "s_tau x = s^pi_(tau o mu) s^mu_pi x (k <= 2)",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         const std::size_t k = 1 + (d.rng() & 1u);
         std::vector<Index> all;
         for (Index i = 0; i < d.max_indices; ++i) all.push_back(i);
         auto mu = d.distinct(all, k);
         if (!mu) return std::nullopt;
         std::map<Index, Index> m;
         for (Index i : *mu) m[i] = d.idx();
         FiniteTransformation tau(m);
         IndexSet blocked = free_indices(x, d.sig);
         std::vector<Index> tau_mu;
         for (Index i : *mu) {
           blocked.insert(i);
           blocked.insert(tau(i));
           tau_mu.push_back(tau(i));
         }
         auto pi = d.distinct(outside(blocked, d.max_indices + 3), k);
         if (!pi) return std::nullopt;
         return Instance{{s_tau(tau, x, d.sig), s_seq(*pi, tau_mu, s_seq(*mu, *pi, x))}};
       }},
      {"T5-4(i)", "s_tau is a Boolean endomorphism",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         Term y = d.term();
         FiniteTransformation tau = d.transformation(d.max_indices);
         auto s = [&](const Term& t) { return s_tau(tau, t, d.sig); };
         return Instance{{s(lor(x, y)), lor(s(x), s(y))}, {s(neg(x)), neg(s(x))}, {s(zero()), zero()}, {s(one()), one()}};
       }},
      {"T5-4(ii)", "s_(sigma o tau) = s_sigma o s_tau",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         FiniteTransformation sigma = d.transformation(d.max_indices);
         FiniteTransformation tau = d.transformation(d.max_indices);
         return Instance{{s_tau(compose(sigma, tau), x, d.sig), s_tau(sigma, s_tau(tau, x, d.sig), d.sig)}};
       }},
      {"T5-4(iii)", "sigma = tau off Gamma implies s_sigma c_(Gamma) x = s_tau c_(Gamma) x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         IndexSet gamma = d.subset(d.max_indices);
         FiniteTransformation sigma = d.transformation(d.max_indices);
         std::map<Index, Index> m = sigma.entries();
         for (Index g : gamma) m[g] = d.idx();
         FiniteTransformation tau(m);
         Term body = cyls(gamma, x);
         return Instance{{s_tau(sigma, body, d.sig), s_tau(tau, body, d.sig)}};
       }},
      {"T5-4(iv)", "sigma = tau on Delta x implies s_sigma x = s_tau x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         IndexSet delta = free_indices(x, d.sig);
         FiniteTransformation sigma = d.transformation(d.max_indices);
         std::map<Index, Index> m;
         for (Index i = 0; i < d.max_indices; ++i) m[i] = delta.count(i) ? sigma(i) : d.idx();
         FiniteTransformation tau(m);
         return Instance{{s_tau(sigma, x, d.sig), s_tau(tau, x, d.sig)}};
       }},
      {"T5-4(v)", "tau^-1 Gamma = Delta, tau one-one on Delta implies c_(Gamma) s_tau x = s_tau c_(Delta) x",
       [](Drawer& d) -> std::optional<Instance> {
         Term x = d.term();
         IndexSet gamma = d.subset(d.max_indices);
         FiniteTransformation tau = d.transformation(d.max_indices);
         IndexSet delta;
         for (Index i = 0; i < d.max_indices; ++i) {
           if (gamma.count(tau(i))) delta.insert(i);
         }
         std::set<Index> images;
         for (Index i : delta) {
           if (!images.insert(tau(i)).second) return std::nullopt;
         }
         return Instance{{cyls(gamma, s_tau(tau, x, d.sig)), s_tau(tau, cyls(delta, x), d.sig)}};
       }},
  };
  return defs;
}

const IdentityDef& find_identity(const std::string& name) {
  for (const auto& def : catalogue()) {
    if (def.name == name) return def;
  }
  throw Error("unknown identity '" + name + "'");
}

}  // namespace

std::vector<std::string> identity_names() {
  std::vector<std::string> out;
  for (const auto& def : catalogue()) out.push_back(def.name);
  return out;
}

bool is_identity_name(const std::string& name) {
  return std::any_of(catalogue().begin(), catalogue().end(), [&](const IdentityDef& d) { return d.name == name; });
}

Signature identity_signature() { return parse_signature("p: 0\nq: 0 1\nr:\n"); }

IdentityReport check_identity(const std::string& name, std::size_t trials, const Bounds& bounds,
                              const IdentityOptions& opts) {
  const IdentityDef& def = find_identity(name);
  const Signature sig = identity_signature();
  IdentityReport report;
  report.name = def.name;
  report.statement = def.statement;
  report.reading = "s^a_b and s_b^a both denote Subst(over=a, from=b): overwrite coordinate a with coordinate b";
  std::mt19937_64 rng(opts.seed);
  Drawer d{rng, sig, opts.term_depth, std::max(1, bounds.max_indices)};
  const std::size_t max_draws = 50 * trials + 50;
  for (std::size_t draws = 0; report.checked < trials && draws < max_draws; ++draws) {
    std::optional<Instance> inst = def.draw(d);
    if (!inst) {
      ++report.skipped;
      continue;
    }
    ++report.checked;
    EqOptions eq = opts.eq;
    eq.seed = opts.eq.seed + report.checked;
    bool all_exhaustive = true;
    for (const auto& [lhs, rhs] : *inst) {
      EqResult r = eq_at_bound(lhs, rhs, sig, bounds, eq);
      all_exhaustive = all_exhaustive && r.exhaustive;
      if (!r.equal) {
        report.pass = false;
        report.counterexample = print(lhs) + " != " + print(rhs) + " at " + describe(*r.witness, sig);
        return report;
      }
    }
    if (all_exhaustive) ++report.exhaustive;
  }
  if (report.checked < trials) {
    report.pass = false;
    report.counterexample = "side condition satisfied by only " + std::to_string(report.checked) + " draws";
  }
  return report;
}

}  // namespace msa
