#include "msa/interp.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "msa/rewrite.hpp"
#include "msa/transform.hpp"

namespace msa {

bool is_quantified(const Term& t, const Signature& sig) {
  if (!is_propositional(t)) return true;
  for (const auto& g : generators(t)) {
    if (!sig.dims(g).empty()) return true;
  }
  return false;
}

namespace {

std::set<std::string> common_vocabulary(const InterpolationProblem& p) {
  std::set<std::string> out;
  std::set_intersection(p.x1.begin(), p.x1.end(), p.x2.begin(), p.x2.end(), std::inserter(out, out.end()));
  return out;
}

IndexSet common_indices(const InterpolationProblem& p) {
  IndexSet a = free_indices(p.left, p.sig), b = free_indices(p.right, p.sig), out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

Term replace_generators(const Term& t, const std::map<std::string, Term>& table) {
  switch (t.op()) {
    case Op::Zero:
    case Op::One: return t;
    case Op::Gen: {
      auto it = table.find(t.name());
      return it == table.end() ? t : it->second;
    }
    case Op::Not: return neg(replace_generators(t.arg(), table));
    case Op::Or: return lor(replace_generators(t.arg(0), table), replace_generators(t.arg(1), table));
    case Op::And: return land(replace_generators(t.arg(0), table), replace_generators(t.arg(1), table));
    case Op::Box: return box(replace_generators(t.arg(), table));
    case Op::Cyl: return cyl(t.index(), replace_generators(t.arg(), table));
    case Op::Subst: return subst(t.over(), t.from(), replace_generators(t.arg(), table));
  }
  return t;
}

// Ambient tuple for grounding: distinct values on the free coordinates,
// common ones first, as far as the domain allows.
std::vector<int> lifting_tuple(const InterpolationProblem& p, int width, int n) {
  std::vector<int> tuple(static_cast<std::size_t>(width), 0);
  IndexSet common = common_indices(p);
  IndexSet rest = free_indices(p.left, p.sig);
  rest.merge(free_indices(p.right, p.sig));
  int next = 0;
  for (Index i : common) {
    if (i < width) tuple[static_cast<std::size_t>(i)] = next++ % n;
  }
  for (Index i : rest) {
    if (i < width && !common.count(i)) tuple[static_cast<std::size_t>(i)] = next++ % n;
  }
  return tuple;
}

// Maximal quantified subterms become opaque atoms shared by both sides.
class Abstraction {
 public:
  explicit Abstraction(const Signature& sig) : sig_(sig) {}

  Term abstract(const Term& t) {
    switch (t.op()) {
      case Op::Zero:
      case Op::One: return t;
      case Op::Not: return neg(abstract(t.arg()));
      case Op::Or: return lor(abstract(t.arg(0)), abstract(t.arg(1)));
      case Op::And: return land(abstract(t.arg(0)), abstract(t.arg(1)));
      case Op::Box: return box(abstract(t.arg()));
      case Op::Gen:
        if (sig_.dims(t.name()).empty()) return t;
        [[fallthrough]];
      default: {
        auto it = atoms_.find(t);
        if (it == atoms_.end()) {
          std::string name = "@" + std::to_string(atoms_.size());
          it = atoms_.emplace(t, name).first;
          back_.emplace(name, t);
        }
        return gen(it->second);
      }
    }
  }

  Term restore(const Term& t) const { return replace_generators(t, back_); }

 private:
  const Signature& sig_;
  std::map<Term, std::string> atoms_;
  std::map<std::string, Term> back_;
};

// Rebuilds a term over indices from a ground interpolant.  env maps domain
// labels to the coordinate holding them.
class Lifter {
 public:
  Lifter(const Signature& sig, const std::vector<std::string>& domain, IndexSet choices)
      : sig_(sig), domain_(domain), choices_(std::move(choices)) {}

  std::optional<Term> lift(const Term& g, const std::map<std::string, Index>& env) {
    switch (g.op()) {
      case Op::Zero:
      case Op::One: return g;
      case Op::Gen: return atom(g.name(), env);
      case Op::Not: {
        auto a = lift(g.arg(), env);
        return a ? std::optional<Term>(neg(*a)) : std::nullopt;
      }
      case Op::Box: {
        auto a = lift(g.arg(), env);
        return a ? std::optional<Term>(box(*a)) : std::nullopt;
      }
      case Op::Or:
      case Op::And: {
        std::vector<Term> parts;
        flatten(g, g.op(), parts);
        return lift_list(parts, g.op(), env);
      }
      default: return std::nullopt;
    }
  }

 private:
  static void flatten(const Term& g, Op op, std::vector<Term>& out) {
    if (g.op() == op) {
      flatten(g.arg(0), op, out);
      flatten(g.arg(1), op, out);
    } else {
      out.push_back(g);
    }
  }

  std::optional<Term> atom(const std::string& label, const std::map<std::string, Index>& env) {
    GroundAtom a = parse_ground_atom(label);
    if (!sig_.declared(a.name)) return std::nullopt;
    const IndexSet& dims = sig_.dims(a.name);
    if (dims.size() != a.tuple.size()) return std::nullopt;
    std::map<Index, Index> sigma;
    auto d = dims.begin();
    for (const auto& v : a.tuple) {
      auto it = env.find(v);
      if (it == env.end()) return std::nullopt;
      sigma[*d++] = it->second;
    }
    IndexSet avoid = dims;
    for (const auto& [v, i] : env) avoid.insert(i);
    return apply_chain(chain_for(FiniteTransformation(sigma), avoid), gen(a.name));
  }

  std::optional<Term> lift_list(std::vector<Term> parts, Op op, const std::map<std::string, Index>& env) {
    auto combine = [op](const Term& a, const Term& b) { return op == Op::Or ? lor(a, b) : land(a, b); };
    const std::size_t n = domain_.size();
    std::set<Index> taken;
    for (const auto& [v, i] : env) taken.insert(i);
    if (parts.size() >= n && n > 1) {
      for (Index i : choices_) {
        if (taken.count(i)) continue;
        auto with = [&](const std::string& v) {
          std::map<std::string, Index> e = env;
          e[v] = i;
          return e;
        };
        // lifted[k][d]: part k read with element d at coordinate i.
        std::vector<std::vector<std::optional<Term>>> lifted(parts.size(), std::vector<std::optional<Term>>(n));
        for (std::size_t k = 0; k < parts.size(); ++k)
          for (std::size_t d = 0; d < n; ++d) lifted[k][d] = lift(parts[k], with(domain_[d]));
        for (std::size_t k0 = 0; k0 < parts.size(); ++k0) {
          const auto& body = lifted[k0][0];
          if (!body) continue;
          std::vector<bool> used(parts.size(), false);
          bool complete = true;
          for (std::size_t d = 0; d < n && complete; ++d) {
            bool found = false;
            for (std::size_t k = 0; k < parts.size() && !found; ++k) {
              if (!used[k] && lifted[k][d] && *lifted[k][d] == *body) {
                used[k] = true;
                found = true;
              }
            }
            complete = found;
          }
          if (!complete) continue;
          std::vector<Term> rest;
          for (std::size_t k = 0; k < parts.size(); ++k) {
            if (!used[k]) rest.push_back(parts[k]);
          }
          Term q = op == Op::Or ? cyl(i, *body) : qall(i, *body);
          if (rest.empty()) return q;
          if (auto r = lift_list(rest, op, env)) return combine(q, *r);
        }
      }
    }
    std::optional<Term> out;
    for (const Term& part : parts) {
      auto a = lift(part, env);
      if (!a) return std::nullopt;
      out = out ? combine(*out, *a) : *a;
    }
    return out;
  }

  const Signature& sig_;
  const std::vector<std::string>& domain_;
  IndexSet choices_;
};

void subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  for (std::size_t k = 0; k < t.arity(); ++k) subterms(t.arg(k), out);
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (std::size_t k = 0; k < t.arity(); ++k) n += term_size(t.arg(k));
  return n;
}

ProofResult instance_proof(const InterpolationProblem& p, const std::vector<Term>& gamma,
                           const std::vector<Term>& delta, int domain_bound, const ProverOptions& opts) {
  std::vector<Term> all = gamma;
  all.insert(all.end(), delta.begin(), delta.end());
  const int width = std::max(required_width(all, p.sig), required_width({p.left, p.right}, p.sig));
  auto domain = domain_labels(static_cast<std::size_t>(domain_bound));
  auto tuple = lifting_tuple(p, width, domain_bound);
  Sequent s;
  for (const Term& g : gamma) s.left.push_back(ground(g, domain, tuple, p.sig));
  for (const Term& d : delta) s.right.push_back(ground(d, domain, tuple, p.sig));
  return prove(p.logic, s, opts);
}

}  // namespace

InterpolantCheck verify_interpolant(const InterpolationProblem& p, const Term& interpolant, int domain_bound,
                                    const ProverOptions& opts) {
  InterpolantCheck c;
  const std::set<std::string> common = common_vocabulary(p);
  c.vocabulary_ok = true;
  bool declared = true;
  for (const auto& g : generators(interpolant)) {
    if (!common.count(g)) {
      c.vocabulary_ok = false;
      c.failures.push_back("vocabulary: generator " + g + " is not in X1 and X2");
    }
    declared = declared && p.sig.declared(g);
  }
  if (!declared) {
    c.failures.push_back("index: interpolant uses undeclared generators");
    c.failures.push_back("left: not checked");
    c.failures.push_back("right: not checked");
    return c;
  }
  IndexSet allowed = common_indices(p);
  c.index_ok = true;
  for (Index i : free_indices(interpolant, p.sig)) {
    if (!allowed.count(i)) {
      c.index_ok = false;
      c.failures.push_back("index: free index " + std::to_string(i) + " is not free in both A and B");
    }
  }
  c.left_ok = consequence({p.left}, {interpolant}, p.logic, domain_bound, p.sig, opts).holds;
  if (!c.left_ok) c.failures.push_back("left: A does not entail the interpolant");
  c.right_ok = consequence({interpolant}, {p.right}, p.logic, domain_bound, p.sig, opts).holds;
  if (!c.right_ok) c.failures.push_back("right: the interpolant does not entail B");
  return c;
}

InterpolationResult interpolate(const InterpolationProblem& p, int domain_bound, const ProverOptions& opts) {
  if (domain_bound < 1) throw Error("domain bound must be positive");
  for (const auto& g : generators(p.left)) {
    if (!p.x1.count(g)) throw Error("generator " + g + " of A is not in X1");
  }
  for (const auto& g : generators(p.right)) {
    if (!p.x2.count(g)) throw Error("generator " + g + " of B is not in X2");
  }
  InterpolationResult res;
  res.domain_bound = domain_bound;
  ProverOptions quiet = opts;
  quiet.record_proof = false;
  quiet.minimize = false;

  auto finish = [&](const Term& interp, const std::string& method) {
    res.interpolant = interp;
    res.method = method;
    InterpolantCheck c = verify_interpolant(p, interp, domain_bound, quiet);
    res.vocabulary_ok = c.vocabulary_ok;
    res.index_ok = c.index_ok;
    if (res.reabstracted) {
      res.left_proof = instance_proof(p, {p.left}, {interp}, domain_bound, opts);
      res.right_proof = instance_proof(p, {interp}, {p.right}, domain_bound, opts);
    }
    return res;
  };

  if (!is_quantified(p.left, p.sig) && !is_quantified(p.right, p.sig)) {
    InterpolantProof ip = prove_sided(p.logic, {{p.left, Side::L}}, {{p.right, Side::R}}, quiet);
    if (!ip.proof.provable) throw NotDerivable("A does not entail B in " + p.logic.name);
    return finish(*ip.interpolant, "proof");
  }

  if (!consequence({p.left}, {p.right}, p.logic, domain_bound, p.sig, quiet).holds) {
    throw NotDerivable("A does not entail B in " + p.logic.name + " at domain bound " +
                       std::to_string(domain_bound));
  }
  auto accept = [&](const Term& cand) { return verify_interpolant(p, cand, domain_bound, quiet).all(); };

  // Quantified subterms as opaque atoms, on the input and on normal forms.
  for (bool normal : {false, true}) {
    Abstraction abs(p.sig);
    Term a = normal ? normalize(p.left, p.sig) : p.left;
    Term b = normal ? normalize(p.right, p.sig) : p.right;
    InterpolantProof ip = prove_sided(p.logic, {{abs.abstract(a), Side::L}}, {{abs.abstract(b), Side::R}}, quiet);
    if (ip.proof.provable) {
      Term cand = abs.restore(*ip.interpolant);
      if (accept(cand)) return finish(cand, "abstraction");
    }
  }

  // Ground at the bound, then lift back over the free coordinates.
  const int width = required_width({p.left, p.right}, p.sig);
  auto domain = domain_labels(static_cast<std::size_t>(domain_bound));
  auto tuple = lifting_tuple(p, width, domain_bound);
  InterpolantProof ip = prove_sided(p.logic, {{ground(p.left, domain, tuple, p.sig), Side::L}},
                                    {{ground(p.right, domain, tuple, p.sig), Side::R}}, quiet);
  if (!ip.proof.provable) throw Error("internal: ground instance not provable although the consequence holds");
  res.ground_interpolant = *ip.interpolant;
  {
    std::map<std::string, Index> env;
    for (Index i : common_indices(p)) env.emplace(domain[static_cast<std::size_t>(tuple[static_cast<std::size_t>(i)])], i);
    IndexSet choices;
    for (Index i = 0; i < width + 2; ++i) choices.insert(i);
    Lifter lifter(p.sig, domain, choices);
    if (auto cand = lifter.lift(*ip.interpolant, env)) {
      if (accept(*cand)) return finish(*cand, "lifted");
      Term n = normalize(*cand, p.sig);
      if (accept(n)) return finish(n, "lifted");
    }
  }

  // Subterms of A and B over the common vocabulary, and their closures.
  std::set<Term> pool;
  for (const Term& t : {p.left, p.right, normalize(p.left, p.sig), normalize(p.right, p.sig)}) subterms(t, pool);
  const std::set<std::string> common = common_vocabulary(p);
  const IndexSet allowed = common_indices(p);
  std::vector<Term> cands;
  for (const Term& t : pool) {
    bool ok = true;
    for (const auto& g : generators(t)) ok = ok && common.count(g);
    if (!ok) continue;
    IndexSet fv = free_indices(t, p.sig);
    Term closed_e = t, closed_a = t;
    for (Index i : fv) {
      if (!allowed.count(i)) {
        closed_e = cyl(i, closed_e);
        closed_a = qall(i, closed_a);
      }
    }
    cands.push_back(closed_e);
    if (closed_a != closed_e) cands.push_back(closed_a);
  }
  std::sort(cands.begin(), cands.end(), [](const Term& a, const Term& b) {
    const auto sa = term_size(a), sb = term_size(b);
    return sa != sb ? sa < sb : a < b;
  });
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const Term& c : cands) {
    if (accept(c)) return finish(c, "candidate");
  }

  res.reabstracted = false;
  return finish(*ip.interpolant, "ground");
}

// ---------------------------------------------------------------------------
// Corpus

std::vector<InterpolationProblem> load_corpus(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("corpus: ") + e.what());
  }
  std::vector<InterpolationProblem> out;
  try {
    Signature sig = parse_signature(doc.value("signature", std::string()));
    std::size_t k = 0;
    for (const auto& rec : doc.at("problems")) {
      InterpolationProblem p;
      p.name = rec.value("name", "problem-" + std::to_string(k));
      p.logic = logic_from_name(rec.at("logic").get<std::string>());
      p.sig = sig;
      p.left = parse(rec.at("A").get<std::string>(), sig);
      p.right = parse(rec.at("B").get<std::string>(), sig);
      if (rec.contains("X1")) {
        for (const auto& g : rec.at("X1")) p.x1.insert(g.get<std::string>());
      } else {
        p.x1 = generators(p.left);
      }
      if (rec.contains("X2")) {
        for (const auto& g : rec.at("X2")) p.x2.insert(g.get<std::string>());
      } else {
        p.x2 = generators(p.right);
      }
      if (rec.contains("expected")) p.expected = parse(rec.at("expected").get<std::string>(), sig);
      out.push_back(std::move(p));
      ++k;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("corpus: ") + e.what());
  }
  return out;
}

std::vector<InterpolationProblem> load_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_corpus(buf.str());
}

}  // namespace msa
