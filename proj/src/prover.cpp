#include "msa/prover.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace msa {

bool Logic::extends(const Logic& other) const {
  // D follows from reflexivity, so T and S4 contain D.
  const bool has_d = serial || reflexive;
  const bool other_d = other.serial || other.reflexive;
  return (has_d || !other_d) && (reflexive || !other.reflexive) && (transitive || !other.transitive);
}

Logic logic_from_name(const std::string& name) {
  for (const Logic& l : all_logics()) {
    if (l.name == name) return l;
  }
  throw Error("unknown logic '" + name + "' (expected K, D, T, K4, D4 or S4)");
}

std::vector<Logic> all_logics() { return {Logic::K(), Logic::D(), Logic::T(), Logic::K4(), Logic::D4(), Logic::S4()}; }

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t k = 0; k < s.left.size(); ++k) out += (k ? ", " : "") + pretty(s.left[k]);
  out += " |- ";
  for (std::size_t k = 0; k < s.right.size(); ++k) out += (k ? ", " : "") + pretty(s.right[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Grounding

std::string GroundAtom::label() const {
  if (tuple.empty()) return name;
  std::string out = name + "[";
  for (std::size_t k = 0; k < tuple.size(); ++k) out += (k ? "," : "") + tuple[k];
  return out + "]";
}

GroundAtom parse_ground_atom(const std::string& label) {
  GroundAtom a;
  auto open = label.find('[');
  if (open == std::string::npos) {
    a.name = label;
    return a;
  }
  if (label.back() != ']') throw ParseError("malformed ground atom '" + label + "'", label.size());
  a.name = label.substr(0, open);
  std::string inner = label.substr(open + 1, label.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    auto comma = inner.find(',', start);
    if (comma == std::string::npos) comma = inner.size();
    a.tuple.push_back(inner.substr(start, comma - start));
    start = comma + 1;
  }
  return a;
}

namespace {

Term mk_or(const Term& a, const Term& b) {
  if (a.op() == Op::Zero || a == b) return b;
  if (b.op() == Op::Zero) return a;
  if (a.op() == Op::One || b.op() == Op::One) return one();
  return lor(a, b);
}

Term mk_and(const Term& a, const Term& b) {
  if (a.op() == Op::One || a == b) return b;
  if (b.op() == Op::One) return a;
  if (a.op() == Op::Zero || b.op() == Op::Zero) return zero();
  return land(a, b);
}

Term mk_not(const Term& a) {
  if (a.op() == Op::Zero) return one();
  if (a.op() == Op::One) return zero();
  if (a.op() == Op::Not) return a.arg();
  return neg(a);
}

Term mk_box(const Term& a) { return a.op() == Op::One ? one() : box(a); }
Term mk_dia(const Term& a) { return a.op() == Op::Zero ? zero() : mk_not(box(mk_not(a))); }

Term ground_rec(const Term& t, const std::vector<std::string>& domain, std::vector<int>& asg, const Signature& sig) {
  const int width = static_cast<int>(asg.size());
  switch (t.op()) {
    case Op::Zero:
    case Op::One: return t;
    case Op::Not: return mk_not(ground_rec(t.arg(), domain, asg, sig));
    case Op::Or: {
      Term a = ground_rec(t.arg(0), domain, asg, sig);
      return mk_or(a, ground_rec(t.arg(1), domain, asg, sig));
    }
    case Op::And: {
      Term a = ground_rec(t.arg(0), domain, asg, sig);
      return mk_and(a, ground_rec(t.arg(1), domain, asg, sig));
    }
    case Op::Box: return box(ground_rec(t.arg(), domain, asg, sig));
    case Op::Gen: {
      GroundAtom atom{t.name(), {}};
      for (Index i : sig.dims(t.name())) {
        if (i >= width) throw Error("width " + std::to_string(width) + " too small for generator " + t.name());
        atom.tuple.push_back(domain[static_cast<std::size_t>(asg[static_cast<std::size_t>(i)])]);
      }
      return gen(atom.label());
    }
    case Op::Cyl: {
      const Index i = t.index();
      if (i >= width) throw Error("width " + std::to_string(width) + " too small for index " + std::to_string(i));
      const int saved = asg[static_cast<std::size_t>(i)];
      Term out = zero();
      for (int d = 0; d < static_cast<int>(domain.size()); ++d) {
        asg[static_cast<std::size_t>(i)] = d;
        out = mk_or(out, ground_rec(t.arg(), domain, asg, sig));
      }
      asg[static_cast<std::size_t>(i)] = saved;
      return out;
    }
    case Op::Subst: {
      if (t.over() >= width || t.from() >= width) throw Error("width " + std::to_string(width) + " too small");
      const int saved = asg[static_cast<std::size_t>(t.over())];
      asg[static_cast<std::size_t>(t.over())] = asg[static_cast<std::size_t>(t.from())];
      Term out = ground_rec(t.arg(), domain, asg, sig);
      asg[static_cast<std::size_t>(t.over())] = saved;
      return out;
    }
  }
  return t;
}

}  // namespace

Term ground(const Term& t, const std::vector<std::string>& domain, const std::vector<int>& ambient,
            const Signature& sig) {
  if (domain.empty()) throw Error("grounding domain is empty");
  for (int v : ambient) {
    if (v < 0 || v >= static_cast<int>(domain.size())) throw Error("ambient tuple outside the domain");
  }
  std::vector<int> asg = ambient;
  return ground_rec(t, domain, asg, sig);
}

std::vector<std::pair<std::vector<int>, Term>> expand_quantifiers(const Term& t,
                                                                 const std::vector<std::string>& domain,
                                                                 int width, const Signature& sig) {
  if (domain.empty()) throw Error("grounding domain is empty");
  if (required_width({t}, sig) > width) throw Error("width " + std::to_string(width) + " exceeded");
  std::vector<std::pair<std::vector<int>, Term>> out;
  std::vector<int> tuple(static_cast<std::size_t>(width), 0);
  while (true) {
    out.emplace_back(tuple, ground(t, domain, tuple, sig));
    std::size_t k = 0;
    while (k < tuple.size() && ++tuple[k] == static_cast<int>(domain.size())) tuple[k++] = 0;
    if (k == tuple.size()) break;
  }
  return out;
}

int required_width(const std::vector<Term>& ts, const Signature& sig) {
  int width = 0;
  for (const Term& t : ts) {
    width = std::max(width, t.max_index() + 1);
    for (const auto& g : generators(t)) {
      const IndexSet& dims = sig.dims(g);
      if (!dims.empty()) width = std::max(width, *dims.rbegin() + 1);
    }
  }
  return width;
}

std::vector<std::string> domain_labels(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(k < 26 ? std::string(1, static_cast<char>('a' + k)) : "e" + std::to_string(k));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Propositional models

std::vector<bool> eval_prop(const Term& t, const PropModel& m) {
  const std::size_t n = m.size();
  std::unordered_map<Term, std::vector<bool>, TermHash> memo;
  std::function<const std::vector<bool>&(const Term&)> go = [&](const Term& u) -> const std::vector<bool>& {
    if (auto it = memo.find(u); it != memo.end()) return it->second;
    std::vector<bool> out(n, false);
    switch (u.op()) {
      case Op::Zero: break;
      case Op::One: out.assign(n, true); break;
      case Op::Gen: {
        auto it = m.truth.find(u.name());
        if (it != m.truth.end()) out = it->second;
        break;
      }
      case Op::Not: {
        const auto& a = go(u.arg());
        for (std::size_t w = 0; w < n; ++w) out[w] = !a[w];
        break;
      }
      case Op::Or:
      case Op::And: {
        std::vector<bool> a = go(u.arg(0));
        const auto& b = go(u.arg(1));
        for (std::size_t w = 0; w < n; ++w) out[w] = u.op() == Op::Or ? (a[w] || b[w]) : (a[w] && b[w]);
        break;
      }
      case Op::Box: {
        const auto& a = go(u.arg());
        for (std::size_t w = 0; w < n; ++w) {
          bool all = true;
          for (std::size_t v = 0; v < n && all; ++v) all = !m.access[w][v] || a[v];
          out[w] = all;
        }
        break;
      }
      default: throw Error("propositional evaluation met a quantified term");
    }
    return memo.emplace(u, std::move(out)).first->second;
  };
  return go(t);
}

KripkeSystem to_kripke(const PropModel& m) {
  KripkeSystem k = KripkeSystem::constant(m.size(), 1, {});
  k.access = m.access;
  return k;
}

std::string model_to_json(const PropModel& m) {
  nlohmann::json doc = nlohmann::json::parse(to_json(to_kripke(m)));
  nlohmann::json truth = nlohmann::json::object();
  for (const auto& [atom, values] : m.truth) {
    nlohmann::json worlds = nlohmann::json::array();
    for (std::size_t w = 0; w < values.size(); ++w) {
      if (values[w]) worlds.push_back("w" + std::to_string(w));
    }
    truth[atom] = worlds;
  }
  doc["root"] = "w" + std::to_string(m.root);
  doc["true"] = truth;
  return doc.dump();
}

// ---------------------------------------------------------------------------
// Proof search

std::vector<std::string> ProofResult::rule_log() const {
  std::vector<std::string> out;
  if (steps.empty()) return out;
  std::vector<std::pair<std::size_t, int>> stack{{root, 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    const ProofStep& s = steps[id];
    out.push_back(std::to_string(depth) + " " + s.rule + " " + s.sequent);
    for (auto it = s.premises.rbegin(); it != s.premises.rend(); ++it) stack.emplace_back(*it, depth + 1);
  }
  return out;
}

namespace {

struct SF {
  Term f;
  Side side;
  friend bool operator==(const SF&, const SF&) = default;
  friend auto operator<=>(const SF& a, const SF& b) {
    if (auto c = a.f <=> b.f; c != 0) return c;
    return a.side <=> b.side;
  }
};

using Key = std::pair<std::vector<SF>, std::vector<SF>>;

struct Work {
  std::set<SF> left, right;
  std::deque<SF> pend_left, pend_right;
  // Set once the branch closes.
  bool closed = false;
  Term interpolant;
  std::string close_rule;
  std::string close_formula;
};

struct World {
  std::set<std::string> atoms;
  std::vector<std::size_t> children;
  bool self_loop = false;
};

struct Outcome {
  bool provable = false;
  Term interpolant;
  std::size_t step = 0;   // proof step when provable
  std::size_t world = 0;  // countermodel world when open
  bool used_loop = false;
};

std::string side_tag(Side s) { return s == Side::L ? "L" : "R"; }

class Search {
 public:
  Search(const Logic& logic, const ProverOptions& opts) : logic_(logic), opts_(opts) {}

  Outcome solve(const Key& key) {
    if (auto it = proved_.find(key); it != proved_.end()) return it->second;
    if (auto it = refuted_.find(key); it != refuted_.end()) return it->second;
    Work w;
    for (const SF& f : key.first) add_left(w, f);
    for (const SF& f : key.second) add_right(w, f);
    Outcome out = run(std::move(w), key);
    if (out.provable) {
      proved_.emplace(key, out);
    } else if (!out.used_loop) {
      refuted_.emplace(key, out);
    }
    return out;
  }

  std::vector<ProofStep> steps;
  std::vector<World> worlds;
  std::size_t budget_used = 0;

 private:
  std::size_t step(std::string rule, const std::string& formula, std::vector<std::size_t> premises) {
    if (!opts_.record_proof) return 0;
    steps.push_back({std::move(rule), formula, std::move(premises)});
    return steps.size() - 1;
  }

  std::string show(const SF& f) const {
    return opts_.record_proof ? pretty(f.f) + "^" + side_tag(f.side) : std::string();
  }

  void close(Work& w, Term interp, std::string rule, const std::string& formula) {
    if (w.closed) return;
    w.closed = true;
    w.interpolant = std::move(interp);
    w.close_rule = std::move(rule);
    w.close_formula = formula;
  }

  void add_left(Work& w, const SF& f) {
    if (w.closed || !w.left.insert(f).second) return;
    if (f.f.op() == Op::Zero) return close(w, f.side == Side::L ? zero() : one(), "axiom", show(f));
    for (Side s : {f.side, f.side == Side::L ? Side::R : Side::L}) {
      if (w.right.count({f.f, s})) {
        Term interp = f.side == s ? (s == Side::L ? zero() : one()) : (f.side == Side::L ? f.f : mk_not(f.f));
        return close(w, interp, "axiom", show(f));
      }
    }
    switch (f.f.op()) {
      case Op::Not:
      case Op::Or:
      case Op::And: w.pend_left.push_back(f); break;
      case Op::Box:
        if (logic_.reflexive) w.pend_left.push_back(f);
        break;
      case Op::Cyl:
      case Op::Subst: throw Error("prove needs a propositional sequent; ground quantified terms first");
      default: break;
    }
  }

  void add_right(Work& w, const SF& f) {
    if (w.closed || !w.right.insert(f).second) return;
    if (f.f.op() == Op::One) return close(w, f.side == Side::L ? zero() : one(), "axiom", show(f));
    for (Side s : {f.side, f.side == Side::L ? Side::R : Side::L}) {
      if (w.left.count({f.f, s})) {
        Term interp = f.side == s ? (s == Side::L ? zero() : one()) : (s == Side::L ? f.f : mk_not(f.f));
        return close(w, interp, "axiom", show(f));
      }
    }
    switch (f.f.op()) {
      case Op::Not:
      case Op::Or:
      case Op::And: w.pend_right.push_back(f); break;
      case Op::Cyl:
      case Op::Subst: throw Error("prove needs a propositional sequent; ground quantified terms first");
      default: break;
    }
  }

  // Continues after a single-premise rule.
  Outcome chain(const std::string& rule, const std::string& formula, Work w, const Key& key) {
    Outcome r = run(std::move(w), key);
    if (r.provable) r.step = step(rule, formula, {r.step});
    return r;
  }

  Outcome branch(const std::string& rule, const SF& principal, Work a, Work b, const Key& key) {
    Outcome r1 = run(std::move(a), key);
    if (!r1.provable) return r1;
    Outcome r2 = run(std::move(b), key);
    if (!r2.provable) return r2;
    Outcome out;
    out.provable = true;
    out.interpolant = principal.side == Side::L ? mk_or(r1.interpolant, r2.interpolant)
                                                : mk_and(r1.interpolant, r2.interpolant);
    out.step = step(rule, show(principal), {r1.step, r2.step});
    return out;
  }

  Outcome run(Work w, const Key& key) {
    if (++budget_used > opts_.step_budget) throw BudgetExceeded("proof search budget exceeded");
    if (w.closed) {
      Outcome out;
      out.provable = true;
      out.interpolant = w.interpolant;
      out.step = step(w.close_rule, w.close_formula, {});
      return out;
    }
    if (!w.pend_left.empty()) {
      SF f = w.pend_left.front();
      w.pend_left.pop_front();
      const Term& t = f.f;
      switch (t.op()) {
        case Op::Not:
          add_right(w, {t.arg(), f.side});
          return chain("not-L", show(f), std::move(w), key);
        case Op::And:
          add_left(w, {t.arg(0), f.side});
          add_left(w, {t.arg(1), f.side});
          return chain("and-L", show(f), std::move(w), key);
        case Op::Or: {
          Work b = w;
          add_left(w, {t.arg(0), f.side});
          add_left(b, {t.arg(1), f.side});
          return branch("or-L", f, std::move(w), std::move(b), key);
        }
        case Op::Box:
          add_left(w, {t.arg(), f.side});
          return chain("box-T", show(f), std::move(w), key);
        default: break;
      }
    }
    if (!w.pend_right.empty()) {
      SF f = w.pend_right.front();
      w.pend_right.pop_front();
      const Term& t = f.f;
      switch (t.op()) {
        case Op::Not:
          add_left(w, {t.arg(), f.side});
          return chain("not-R", show(f), std::move(w), key);
        case Op::Or:
          add_right(w, {t.arg(0), f.side});
          add_right(w, {t.arg(1), f.side});
          return chain("or-R", show(f), std::move(w), key);
        case Op::And: {
          Work b = w;
          add_right(w, {t.arg(0), f.side});
          add_right(b, {t.arg(1), f.side});
          return branch("and-R", f, std::move(w), std::move(b), key);
        }
        default: break;
      }
    }
    return modal(w, key);
  }

  Key jump_premise(const Work& w, std::optional<SF> target) const {
    std::set<SF> left;
    for (const SF& f : w.left) {
      if (f.f.op() != Op::Box) continue;
      if (logic_.transitive) left.insert(f);
      if (!(logic_.transitive && logic_.reflexive)) left.insert({f.f.arg(), f.side});
    }
    Key k;
    k.first.assign(left.begin(), left.end());
    if (target) k.second.push_back(*target);
    return k;
  }

  Outcome modal(const Work& w, const Key& key) {
    const std::size_t wid = worlds.size();
    worlds.emplace_back();
    for (const SF& f : w.left) {
      if (f.f.op() == Op::Gen) worlds[wid].atoms.insert(f.f.name());
    }
    history_.emplace_back(key, wid);
    Outcome open;
    open.world = wid;

    auto attempt = [&](const Key& premise, bool& proved, Outcome& result) {
      for (const auto& [k, world] : history_) {
        if (logic_.transitive && k == premise) {
          worlds[wid].children.push_back(world);
          open.used_loop = true;
          if (opts_.record_proof) step("loop", "", {});
          return;
        }
      }
      Outcome r = solve(premise);
      if (r.provable) {
        proved = true;
        result = r;
      } else {
        worlds[wid].children.push_back(r.world);
        open.used_loop = open.used_loop || r.used_loop;
      }
    };

    bool any_box_right = false;
    for (const SF& f : w.right) {
      if (f.f.op() != Op::Box) continue;
      any_box_right = true;
      SF target{f.f.arg(), f.side};
      bool proved = false;
      Outcome r;
      attempt(jump_premise(w, target), proved, r);
      if (proved) {
        history_.pop_back();
        Outcome out;
        out.provable = true;
        out.interpolant = f.side == Side::L ? mk_dia(r.interpolant) : mk_box(r.interpolant);
        const char* rule = target.f.op() == Op::Not ? "dia" : (logic_.transitive ? "box-4" : "box-K");
        out.step = step(rule, show(f), {r.step});
        return out;
      }
    }
    if (logic_.serial && !any_box_right) {
      Key premise = jump_premise(w, std::nullopt);
      if (premise.first.empty()) {
        worlds[wid].self_loop = true;
      } else {
        bool proved = false;
        Outcome r;
        attempt(premise, proved, r);
        if (proved) {
          history_.pop_back();
          Outcome out;
          out.provable = true;
          out.interpolant = mk_dia(r.interpolant);
          out.step = step("serial", "", {r.step});
          return out;
        }
      }
    }
    history_.pop_back();
    return open;
  }

  const Logic& logic_;
  const ProverOptions& opts_;
  std::vector<std::pair<Key, std::size_t>> history_;
  std::map<Key, Outcome> proved_;
  std::map<Key, Outcome> refuted_;
};

void close_frame(std::vector<std::vector<bool>>& r, const Logic& logic) {
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
}

Term sequent_formula(const Sequent& s) {
  Term l = one();
  for (const Term& t : s.left) l = mk_and(l, t);
  Term r = zero();
  for (const Term& t : s.right) r = mk_or(r, t);
  return lor(neg(l), r);
}

bool falsified_at_root(const Term& f, const PropModel& m) { return !eval_prop(f, m)[m.root]; }

// Induced submodel on `keep` (root first).
PropModel restrict_model(const PropModel& m, const std::vector<std::size_t>& keep) {
  PropModel out;
  const std::size_t n = keep.size();
  out.access.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out.access[a][b] = m.access[keep[a]][keep[b]];
  for (const auto& [atom, values] : m.truth) {
    std::vector<bool> v(n);
    for (std::size_t a = 0; a < n; ++a) v[a] = values[keep[a]];
    out.truth[atom] = v;
  }
  out.root = 0;
  return out;
}

std::vector<std::size_t> reachable(const std::vector<std::vector<bool>>& r, std::size_t root) {
  std::vector<bool> seen(r.size(), false);
  std::vector<std::size_t> order{root};
  seen[root] = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t v = 0; v < r.size(); ++v) {
      if (r[order[k]][v] && !seen[v]) {
        seen[v] = true;
        order.push_back(v);
      }
    }
  }
  return order;
}

PropModel minimize(const PropModel& start, const Term& f, const Logic& logic) {
  PropModel m = start;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t drop = m.size(); drop-- > 1;) {
      std::vector<std::size_t> keep;
      for (std::size_t w = 0; w < m.size(); ++w) {
        if (w != drop) keep.push_back(w);
      }
      PropModel cand = restrict_model(m, keep);
      cand = restrict_model(cand, reachable(cand.access, 0));
      if (frame_has(cand.access, logic.flags()) && falsified_at_root(f, cand)) {
        m = cand;
        changed = true;
        break;
      }
    }
  }
  return m;
}

InterpolantProof run_search(const Logic& logic, const std::vector<SidedFormula>& left,
                            const std::vector<SidedFormula>& right, const ProverOptions& opts) {
  Search search(logic, opts);
  Key key;
  std::set<SF> l, r;
  for (const auto& f : left) l.insert({f.formula, f.side});
  for (const auto& f : right) r.insert({f.formula, f.side});
  key.first.assign(l.begin(), l.end());
  key.second.assign(r.begin(), r.end());
  Outcome out = search.solve(key);

  InterpolantProof res;
  res.proof.provable = out.provable;
  res.proof.search_steps = search.budget_used;
  if (out.provable) {
    res.interpolant = out.interpolant;
    res.proof.steps = std::move(search.steps);
    res.proof.root = out.step;
    return res;
  }

  // Countermodel from the open tree.
  std::vector<std::size_t> order{out.world};
  std::map<std::size_t, std::size_t> index{{out.world, 0}};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t c : search.worlds[order[k]].children) {
      if (index.emplace(c, order.size()).second) order.push_back(c);
    }
  }
  PropModel m;
  const std::size_t n = order.size();
  m.access.assign(n, std::vector<bool>(n, false));
  std::set<std::string> atoms;
  for (const auto& f : left) atoms.merge(generators(f.formula));
  for (const auto& f : right) atoms.merge(generators(f.formula));
  for (const auto& a : atoms) m.truth[a] = std::vector<bool>(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const World& w = search.worlds[order[k]];
    for (std::size_t c : w.children) m.access[k][index.at(c)] = true;
    if (w.self_loop) m.access[k][k] = true;
    for (const auto& a : w.atoms) {
      if (m.truth.count(a)) m.truth[a][k] = true;
    }
  }
  close_frame(m.access, logic);
  Sequent plain;
  for (const auto& f : left) plain.left.push_back(f.formula);
  for (const auto& f : right) plain.right.push_back(f.formula);
  Term f = sequent_formula(plain);
  if (!frame_has(m.access, logic.flags()) || !falsified_at_root(f, m)) {
    throw Error("internal: extracted countermodel does not refute " + to_string(plain));
  }
  res.proof.countermodel = opts.minimize ? minimize(m, f, logic) : m;
  return res;
}

void require_propositional(const Term& t) {
  if (!is_propositional(t)) throw Error("prove needs a propositional sequent; ground quantified terms first");
}

}  // namespace

ProofResult prove(const Logic& logic, const Sequent& s, const ProverOptions& opts) {
  std::vector<SidedFormula> left, right;
  for (const Term& t : s.left) {
    require_propositional(t);
    left.push_back({t, Side::L});
  }
  for (const Term& t : s.right) {
    require_propositional(t);
    right.push_back({t, Side::L});
  }
  return run_search(logic, left, right, opts).proof;
}

InterpolantProof prove_sided(const Logic& logic, const std::vector<SidedFormula>& left,
                             const std::vector<SidedFormula>& right, const ProverOptions& opts) {
  for (const auto& f : left) require_propositional(f.formula);
  for (const auto& f : right) require_propositional(f.formula);
  return run_search(logic, left, right, opts);
}

// ---------------------------------------------------------------------------
// Consequence

std::vector<std::vector<int>> canonical_tuples(const IndexSet& coords, int width, int domain_size) {
  std::vector<Index> cs;
  for (Index i : coords) {
    if (i < width) cs.push_back(i);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> tuple(static_cast<std::size_t>(width), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int used) {
    if (k == cs.size()) {
      out.push_back(tuple);
      return;
    }
    for (int v = 0; v <= std::min(used, domain_size - 1); ++v) {
      tuple[static_cast<std::size_t>(cs[k])] = v;
      rec(k + 1, std::max(used, v + 1));
    }
    tuple[static_cast<std::size_t>(cs[k])] = 0;
  };
  rec(0, 0);
  return out;
}

ConsequenceResult consequence(const std::vector<Term>& gamma, const std::vector<Term>& delta, const Logic& logic,
                              int domain_bound, const Signature& sig, const ProverOptions& opts) {
  if (domain_bound < 1) throw Error("domain bound must be positive");
  std::vector<Term> all = gamma;
  all.insert(all.end(), delta.begin(), delta.end());
  ConsequenceResult res;
  res.domain_bound = domain_bound;
  res.width = required_width(all, sig);
  IndexSet fv;
  for (const Term& t : all) fv.merge(free_indices(t, sig));
  ProverOptions po = opts;
  po.record_proof = false;
  po.minimize = false;
  for (int n = 1; n <= domain_bound; ++n) {
    std::vector<std::string> domain = domain_labels(static_cast<std::size_t>(n));
    for (const auto& tuple : canonical_tuples(fv, res.width, n)) {
      Sequent s;
      for (const Term& g : gamma) s.left.push_back(ground(g, domain, tuple, sig));
      for (const Term& d : delta) s.right.push_back(ground(d, domain, tuple, sig));
      ProofResult p = prove(logic, s, po);
      ++res.proofs;
      if (!p.provable) {
        res.holds = false;
        res.failing_domain = n;
        res.failing_tuple = tuple;
        res.countermodel = p.countermodel;
        return res;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Frame oracle

namespace {

bool rooted(const std::vector<std::vector<bool>>& r) { return reachable(r, 0).size() == r.size(); }

}  // namespace

std::optional<PropModel> propositional_countermodel(const Term& t, const Logic& logic, int max_worlds) {
  require_propositional(t);
  std::vector<std::string> atoms;
  for (const auto& a : generators(t)) atoms.push_back(a);
  const std::size_t k = atoms.size();

  // Subterms in post-order, shared ones once.
  std::vector<Term> order;
  std::unordered_map<Term, std::size_t, TermHash> pos;
  std::function<void(const Term&)> collect = [&](const Term& u) {
    if (pos.count(u)) return;
    for (std::size_t i = 0; i < u.arity(); ++i) collect(u.arg(i));
    pos.emplace(u, order.size());
    order.push_back(u);
  };
  collect(t);

  for (int n = 1; n <= max_worlds; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    const std::size_t vbits = un * k;
    if (vbits > 24) throw BudgetExceeded("too many valuations for the frame oracle");
    const std::size_t nval = std::size_t{1} << vbits;
    const std::size_t words = std::max<std::size_t>(1, nval / 64);
    const std::uint64_t tail = nval >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << nval) - 1);

    // Atom (a, w) is bit (w*k + a) of the valuation index.
    std::vector<std::vector<std::uint64_t>> pattern(vbits, std::vector<std::uint64_t>(words, 0));
    for (std::size_t b = 0; b < vbits; ++b) {
      for (std::size_t v = 0; v < nval; ++v) {
        if ((v >> b) & 1u) pattern[b][v / 64] |= std::uint64_t{1} << (v % 64);
      }
    }

    std::vector<std::vector<std::uint64_t>> val(order.size() * un, std::vector<std::uint64_t>(words));
    for (std::size_t rel = 0; rel < (std::size_t{1} << (un * un)); ++rel) {
      std::vector<std::vector<bool>> r(un, std::vector<bool>(un, false));
      for (std::size_t a = 0; a < un; ++a)
        for (std::size_t b = 0; b < un; ++b) r[a][b] = ((rel >> (a * un + b)) & 1u) != 0;
      if (!frame_has(r, logic.flags()) || !rooted(r)) continue;

      for (std::size_t s = 0; s < order.size(); ++s) {
        const Term& u = order[s];
        for (std::size_t w = 0; w < un; ++w) {
          auto& out = val[s * un + w];
          switch (u.op()) {
            case Op::Zero: std::fill(out.begin(), out.end(), 0); break;
            case Op::One: std::fill(out.begin(), out.end(), ~std::uint64_t{0}); break;
            case Op::Gen: {
              std::size_t a = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), u.name()) - atoms.begin());
              out = pattern[w * k + a];
              break;
            }
            case Op::Not: {
              const auto& x = val[pos.at(u.arg()) * un + w];
              for (std::size_t i = 0; i < words; ++i) out[i] = ~x[i];
              break;
            }
            case Op::Or:
            case Op::And: {
              const auto& x = val[pos.at(u.arg(0)) * un + w];
              const auto& y = val[pos.at(u.arg(1)) * un + w];
              for (std::size_t i = 0; i < words; ++i) out[i] = u.op() == Op::Or ? (x[i] | y[i]) : (x[i] & y[i]);
              break;
            }
            case Op::Box: {
              std::fill(out.begin(), out.end(), ~std::uint64_t{0});
              const std::size_t a = pos.at(u.arg());
              for (std::size_t v = 0; v < un; ++v) {
                if (!r[w][v]) continue;
                const auto& x = val[a * un + v];
                for (std::size_t i = 0; i < words; ++i) out[i] &= x[i];
              }
              break;
            }
            default: break;
          }
        }
      }
      const auto& root = val[(order.size() - 1) * un];
      for (std::size_t i = 0; i < words; ++i) {
        std::uint64_t falsified = ~root[i] & (i + 1 == words ? tail : ~std::uint64_t{0});
        if (falsified == 0) continue;
        std::size_t v = i * 64 + static_cast<std::size_t>(__builtin_ctzll(falsified));
        PropModel m;
        m.access = r;
        for (std::size_t a = 0; a < k; ++a) {
          std::vector<bool> truth(un);
          for (std::size_t w = 0; w < un; ++w) truth[w] = ((v >> (w * k + a)) & 1u) != 0;
          m.truth[atoms[a]] = truth;
        }
        return m;
      }
    }
  }
  return std::nullopt;
}

OracleResult bounded_countermodel(const Term& t, const Logic& logic, int max_worlds, int max_domain, int width,
                                  const Signature& sig, std::size_t valuation_budget) {
  if (max_worlds < 1 || max_domain < 1) throw Error("bounds must be positive");
  OracleResult res;
  width = std::max(width, required_width({t}, sig));
  if (is_propositional(t)) {
    bool plain = true;
    for (const auto& g : generators(t)) plain = plain && sig.dims(g).empty();
    if (plain || width == 0) {
      if (auto m = propositional_countermodel(t, logic, max_worlds)) {
        FrameWitness w;
        w.system = to_kripke(*m);
        w.width = 0;
        SpacePtr s = make_space(w.system, 0);
        for (const auto& [atom, values] : m->truth) {
          AlgebraElement e(s, false);
          for (std::size_t x = 0; x < values.size(); ++x) e.set(x, 0, values[x]);
          w.valuation[atom] = e;
        }
        w.world = m->root;
        res.witness = std::move(w);
      }
      res.checked = 1;
      return res;
    }
  }

  std::vector<std::pair<std::string, IndexSet>> gens;
  for (const auto& g : generators(t)) gens.emplace_back(g, sig.dims(g));
  std::mt19937_64 rng(1);
  for_each_system(max_worlds, max_domain, logic.flags(), [&](const KripkeSystem& k) {
    SpacePtr s = make_space(k, width);
    std::size_t bits = 0;
    for (const auto& [g, dims] : gens) {
      for (std::size_t w = 0; w < s->worlds(); ++w) {
        std::size_t cells = 1;
        for (std::size_t d = 0; d < dims.size(); ++d) cells *= k.world_domain[w].size();
        bits += cells;
      }
    }
    const bool exhaustive = bits < 40 && (std::size_t{1} << bits) <= valuation_budget;
    if (!exhaustive) res.exhaustive = false;
    const std::size_t rounds = exhaustive ? (std::size_t{1} << bits) : valuation_budget;
    for (std::size_t mask = 0; mask < rounds; ++mask) {
      std::size_t bit = 0;
      Valuation val;
      for (const auto& [g, dims] : gens) {
        val[g] = element_from(s, dims, [&](std::size_t, const std::vector<int>&) {
          return exhaustive ? ((mask >> bit++) & 1u) != 0 : (rng() & 1u) != 0;
        });
      }
      ++res.checked;
      AlgebraElement e = eval(t, s, val);
      for (std::size_t w = 0; w < s->worlds(); ++w) {
        for (std::size_t x = 0; x < s->tuples(); ++x) {
          if (s->valid(w, x) && !e.at(w, x)) {
            res.witness = FrameWitness{k, val, width, w, s->decode(x)};
            return false;
          }
        }
      }
    }
    return true;
  });
  return res;
}

}  // namespace msa
