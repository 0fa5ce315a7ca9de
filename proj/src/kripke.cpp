#include "msa/kripke.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace msa {

using nlohmann::json;

std::size_t uniform(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) return 0;
  return static_cast<std::size_t>(rng() % n);
}

std::vector<std::size_t> KripkeSystem::successors(std::size_t w) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < worlds.size(); ++v) {
    if (access[w][v]) out.push_back(v);
  }
  return out;
}

KripkeSystem KripkeSystem::constant(std::size_t nworlds, std::size_t domain_size,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  KripkeSystem k;
  for (std::size_t w = 0; w < nworlds; ++w) k.worlds.push_back("w" + std::to_string(w));
  k.access.assign(nworlds, std::vector<bool>(nworlds, false));
  for (auto [a, b] : edges) k.access.at(a).at(b) = true;
  for (std::size_t d = 0; d < domain_size; ++d) k.domain.push_back(std::string(1, static_cast<char>('a' + d)));
  std::vector<int> all(domain_size);
  for (std::size_t d = 0; d < domain_size; ++d) all[d] = static_cast<int>(d);
  k.world_domain.assign(nworlds, all);
  return k;
}

std::vector<std::string> validate_system(const KripkeSystem& k) {
  std::vector<std::string> out;
  const std::size_t n = k.worlds.size();
  if (n == 0) out.push_back("no worlds");
  if (k.access.size() != n || k.world_domain.size() != n) {
    out.push_back("shape mismatch between worlds, relation and domains");
    return out;
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (k.world_domain[w].empty()) out.push_back("empty-domain " + k.worlds[w]);
    for (int d : k.world_domain[w]) {
      if (d < 0 || static_cast<std::size_t>(d) >= k.domain.size()) {
        out.push_back("unknown element in domain of " + k.worlds[w]);
      }
    }
  }
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!k.access[w][v]) continue;
      const auto& dw = k.world_domain[w];
      const auto& dv = k.world_domain[v];
      if (!std::includes(dv.begin(), dv.end(), dw.begin(), dw.end())) {
        out.push_back("domain-shrink " + k.worlds[w] + " -> " + k.worlds[v]);
      }
    }
  }
  return out;
}

std::string to_json(const KripkeSystem& k) {
  json doc;
  doc["worlds"] = k.worlds;
  json edges = json::array();
  for (std::size_t w = 0; w < k.worlds.size(); ++w) {
    for (std::size_t v = 0; v < k.worlds.size(); ++v) {
      if (k.access[w][v]) edges.push_back({k.worlds[w], k.worlds[v]});
    }
  }
  doc["edges"] = edges;
  doc["domain"] = k.domain;
  json wd = json::object();
  for (std::size_t w = 0; w < k.worlds.size(); ++w) {
    json elems = json::array();
    for (int d : k.world_domain[w]) elems.push_back(k.domain[static_cast<std::size_t>(d)]);
    wd[k.worlds[w]] = elems;
  }
  doc["worldDomain"] = wd;
  return doc.dump();
}

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what(), e.byte);
  }
}

std::size_t lookup(const std::vector<std::string>& names, const std::string& name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw Error(std::string("unknown ") + what + " '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

KripkeSystem system_from_json(std::string_view text) {
  json doc = parse_json(text, "kripke system");
  KripkeSystem k;
  try {
    k.worlds = doc.at("worlds").get<std::vector<std::string>>();
    const std::size_t n = k.worlds.size();
    k.access.assign(n, std::vector<bool>(n, false));
    for (const auto& e : doc.value("edges", json::array())) {
      k.access[lookup(k.worlds, e.at(0).get<std::string>(), "world")]
              [lookup(k.worlds, e.at(1).get<std::string>(), "world")] = true;
    }
    k.domain = doc.value("domain", std::vector<std::string>{});
    k.world_domain.assign(n, {});
    if (doc.contains("worldDomain")) {
      for (const auto& [w, elems] : doc.at("worldDomain").items()) {
        auto& dom = k.world_domain[lookup(k.worlds, w, "world")];
        for (const auto& e : elems) dom.push_back(static_cast<int>(lookup(k.domain, e.get<std::string>(), "element")));
        std::sort(dom.begin(), dom.end());
        dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
      }
    }
  } catch (const json::exception& e) {
    throw Error(std::string("kripke system: ") + e.what());
  }
  return k;
}

// ---------------------------------------------------------------------------
// Space

Space::Space(KripkeSystem system, int width)
    : system_(std::move(system)), width_(width), dsize_(system_.domain.size()) {
  if (width_ < 0) throw Error("negative width");
  if (auto v = validate_system(system_); !v.empty()) throw Error("invalid kripke system: " + v.front());
  pow_.resize(static_cast<std::size_t>(width_) + 1);
  pow_[0] = 1;
  for (int i = 0; i < width_; ++i) {
    pow_[static_cast<std::size_t>(i) + 1] = pow_[static_cast<std::size_t>(i)] * dsize_;
    if (pow_[static_cast<std::size_t>(i) + 1] > (1u << 22)) throw BudgetExceeded("tuple space too large");
  }
  tuples_ = pow_[static_cast<std::size_t>(width_)];
  valid_.assign(worlds(), std::vector<std::uint8_t>(tuples_, 0));
  for (std::size_t w = 0; w < worlds(); ++w) {
    std::vector<std::uint8_t> in(dsize_, 0);
    for (int d : system_.world_domain[w]) in[static_cast<std::size_t>(d)] = 1;
    for (std::size_t t = 0; t < tuples_; ++t) {
      bool ok = true;
      for (int i = 0; i < width_ && ok; ++i) ok = in[static_cast<std::size_t>(coordinate(t, i))] != 0;
      valid_[w][t] = ok ? 1 : 0;
      cells_ += ok ? 1 : 0;
    }
  }
}

int Space::coordinate(std::size_t tuple, int i) const {
  return static_cast<int>((tuple / pow_[static_cast<std::size_t>(i)]) % dsize_);
}

std::size_t Space::with_coordinate(std::size_t tuple, int i, int value) const {
  const std::size_t p = pow_[static_cast<std::size_t>(i)];
  return tuple - static_cast<std::size_t>(coordinate(tuple, i)) * p + static_cast<std::size_t>(value) * p;
}

std::size_t Space::encode(const std::vector<int>& elements) const {
  std::size_t t = 0;
  for (int i = 0; i < width_; ++i) t += static_cast<std::size_t>(elements.at(static_cast<std::size_t>(i))) * pow_[static_cast<std::size_t>(i)];
  return t;
}

std::vector<int> Space::decode(std::size_t tuple) const {
  std::vector<int> out(static_cast<std::size_t>(width_));
  for (int i = 0; i < width_; ++i) out[static_cast<std::size_t>(i)] = coordinate(tuple, i);
  return out;
}

SpacePtr make_space(KripkeSystem system, int width) { return std::make_shared<const Space>(std::move(system), width); }

// ---------------------------------------------------------------------------
// Elements

AlgebraElement::AlgebraElement(SpacePtr space, bool value) : space_(std::move(space)) {
  bits_.assign(space_->worlds() * space_->tuples(), 0);
  if (value) {
    for (std::size_t w = 0; w < space_->worlds(); ++w) {
      for (std::size_t t = 0; t < space_->tuples(); ++t) bits_[w * space_->tuples() + t] = space_->valid(w, t);
    }
  }
}

void AlgebraElement::set(std::size_t w, std::size_t tuple, bool v) {
  if (!space_->valid(w, tuple)) return;
  bits_[w * space_->tuples() + tuple] = v ? 1 : 0;
}

bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
  return a.space_ == b.space_ && a.bits_ == b.bits_;
}

class ElementOps {
 public:
  static std::vector<std::uint8_t>& bits(AlgebraElement& e) { return e.bits_; }
  static const std::vector<std::uint8_t>& bits(const AlgebraElement& e) { return e.bits_; }
};

namespace {

void same_shape(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.space() || a.space() != b.space()) throw Error("algebra elements from different spaces");
}

}  // namespace

AlgebraElement join(const AlgebraElement& a, const AlgebraElement& b) {
  same_shape(a, b);
  AlgebraElement out = a;
  auto& o = ElementOps::bits(out);
  const auto& y = ElementOps::bits(b);
  for (std::size_t k = 0; k < o.size(); ++k) o[k] |= y[k];
  return out;
}

AlgebraElement meet(const AlgebraElement& a, const AlgebraElement& b) {
  same_shape(a, b);
  AlgebraElement out = a;
  auto& o = ElementOps::bits(out);
  const auto& y = ElementOps::bits(b);
  for (std::size_t k = 0; k < o.size(); ++k) o[k] &= y[k];
  return out;
}

AlgebraElement complement(const AlgebraElement& a) {
  const Space& s = *a.space();
  AlgebraElement out(a.space(), false);
  for (std::size_t w = 0; w < s.worlds(); ++w) {
    for (std::size_t t = 0; t < s.tuples(); ++t) {
      if (s.valid(w, t)) out.set(w, t, !a.at(w, t));
    }
  }
  return out;
}

AlgebraElement box(const AlgebraElement& a) {
  const Space& s = *a.space();
  AlgebraElement out(a.space(), false);
  for (std::size_t w = 0; w < s.worlds(); ++w) {
    auto succ = s.system().successors(w);
    for (std::size_t t = 0; t < s.tuples(); ++t) {
      if (!s.valid(w, t)) continue;
      bool all = std::all_of(succ.begin(), succ.end(), [&](std::size_t v) { return a.at(v, t); });
      out.set(w, t, all);
    }
  }
  return out;
}

AlgebraElement cyl(Index i, const AlgebraElement& a) {
  const Space& s = *a.space();
  if (i < 0 || i >= s.width()) throw Error("cylindrification index " + std::to_string(i) + " outside width");
  AlgebraElement out(a.space(), false);
  for (std::size_t w = 0; w < s.worlds(); ++w) {
    const auto& dom = s.system().world_domain[w];
    for (std::size_t t = 0; t < s.tuples(); ++t) {
      if (!s.valid(w, t)) continue;
      bool any = std::any_of(dom.begin(), dom.end(), [&](int d) { return a.at(w, s.with_coordinate(t, i, d)); });
      out.set(w, t, any);
    }
  }
  return out;
}

AlgebraElement subst(Index over, Index from, const AlgebraElement& a) {
  const Space& s = *a.space();
  if (over < 0 || from < 0 || over >= s.width() || from >= s.width()) {
    throw Error("substitution index outside width");
  }
  AlgebraElement out(a.space(), false);
  for (std::size_t w = 0; w < s.worlds(); ++w) {
    for (std::size_t t = 0; t < s.tuples(); ++t) {
      if (!s.valid(w, t)) continue;
      out.set(w, t, a.at(w, s.with_coordinate(t, over, s.coordinate(t, from))));
    }
  }
  return out;
}

bool leq(const AlgebraElement& e, const AlgebraElement& f) {
  same_shape(e, f);
  const auto& x = ElementOps::bits(e);
  const auto& y = ElementOps::bits(f);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] && !y[k]) return false;
  }
  return true;
}

bool monotone_check(const KripkeSystem& k, const AlgebraElement& e) {
  const Space& s = *e.space();
  if (s.worlds() != k.world_count()) throw Error("element shape does not match system");
  for (std::size_t w = 0; w < k.world_count(); ++w) {
    for (std::size_t v = 0; v < k.world_count(); ++v) {
      if (!k.related(w, v)) continue;
      for (std::size_t t = 0; t < s.tuples(); ++t) {
        if (s.valid(w, t) && e.at(w, t) && !e.at(v, t)) return false;
      }
    }
  }
  return true;
}

AlgebraElement element_from(const SpacePtr& space, const IndexSet& dims,
                            const std::function<bool(std::size_t, const std::vector<int>&)>& fn) {
  for (Index i : dims) {
    if (i >= space->width()) throw Error("width " + std::to_string(space->width()) + " too small for index " + std::to_string(i));
  }
  // fn is called once per world and local tuple, so stateful callbacks still
  // yield an element that ignores the other coordinates.
  AlgebraElement out(space, false);
  const std::size_t dsize = space->system().domain.size();
  std::vector<int> local(dims.size());
  for (std::size_t w = 0; w < space->worlds(); ++w) {
    std::map<std::size_t, bool> seen;
    for (std::size_t t = 0; t < space->tuples(); ++t) {
      if (!space->valid(w, t)) continue;
      std::size_t k = 0;
      std::size_t key = 0;
      for (Index i : dims) {
        local[k] = space->coordinate(t, i);
        key = key * dsize + static_cast<std::size_t>(local[k++]);
      }
      auto it = seen.find(key);
      if (it == seen.end()) it = seen.emplace(key, fn(w, local)).first;
      out.set(w, t, it->second);
    }
  }
  return out;
}

AlgebraElement random_element(const SpacePtr& space, std::mt19937_64& rng) {
  AlgebraElement out(space, false);
  for (std::size_t w = 0; w < space->worlds(); ++w) {
    for (std::size_t t = 0; t < space->tuples(); ++t) {
      if (space->valid(w, t)) out.set(w, t, (rng() & 1u) != 0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Valuations

std::vector<std::string> validate_valuation(const Valuation& val, const Signature& sig) {
  std::vector<std::string> out;
  for (const auto& [name, e] : val) {
    if (!sig.declared(name)) {
      out.push_back("undeclared generator " + name);
      continue;
    }
    const IndexSet& dims = sig.dims(name);
    const Space& s = *e.space();
    for (std::size_t w = 0; w < s.worlds(); ++w) {
      const auto& dom = s.system().world_domain[w];
      for (std::size_t t = 0; t < s.tuples(); ++t) {
        if (!s.valid(w, t)) continue;
        for (int i = 0; i < s.width(); ++i) {
          if (dims.count(i) != 0) continue;
          for (int d : dom) {
            if (e.at(w, s.with_coordinate(t, i, d)) != e.at(w, t)) {
              out.push_back(name + " depends on coordinate " + std::to_string(i));
              goto next_generator;
            }
          }
        }
      }
    }
  next_generator:;
  }
  return out;
}

namespace {

void for_each_local(const std::vector<int>& dom, std::size_t arity,
                    const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<std::size_t> pos(arity, 0);
  std::vector<int> cur(arity);
  while (true) {
    for (std::size_t k = 0; k < arity; ++k) cur[k] = dom[pos[k]];
    fn(cur);
    std::size_t k = 0;
    while (k < arity && ++pos[k] == dom.size()) pos[k++] = 0;
    if (k == arity) return;
  }
}

}  // namespace

std::string to_json(const Valuation& val, const Signature& sig) {
  json doc;
  json gens = json::object();
  int width = 0;
  for (const auto& [name, e] : val) {
    const Space& s = *e.space();
    width = s.width();
    const IndexSet& dims = sig.dims(name);
    json entries = json::array();
    for (std::size_t w = 0; w < s.worlds(); ++w) {
      const auto& dom = s.system().world_domain[w];
      for_each_local(dom, dims.size(), [&](const std::vector<int>& local) {
        std::vector<int> full(static_cast<std::size_t>(s.width()), dom.front());
        std::size_t k = 0;
        for (Index i : dims) full[static_cast<std::size_t>(i)] = local[k++];
        if (e.at(w, s.encode(full))) {
          json tuple = json::array();
          for (int d : local) tuple.push_back(s.system().domain[static_cast<std::size_t>(d)]);
          entries.push_back({s.system().worlds[w], tuple, 1});
        }
      });
    }
    gens[name] = {{"default", 0}, {"entries", entries}};
  }
  doc["width"] = width;
  doc["generators"] = gens;
  return doc.dump();
}

Valuation valuation_from_json(std::string_view text, const SpacePtr& space, const Signature& sig) {
  json doc = parse_json(text, "valuation");
  Valuation val;
  const KripkeSystem& k = space->system();
  try {
    for (const auto& [name, spec] : doc.at("generators").items()) {
      const IndexSet& dims = sig.dims(name);
      const bool def = spec.value("default", 0) != 0;
      std::map<std::pair<std::size_t, std::vector<int>>, bool> table;
      for (const auto& entry : spec.value("entries", json::array())) {
        std::size_t w = lookup(k.worlds, entry.at(0).get<std::string>(), "world");
        std::vector<int> local;
        for (const auto& e : entry.at(1)) local.push_back(static_cast<int>(lookup(k.domain, e.get<std::string>(), "element")));
        if (local.size() != dims.size()) throw Error("tuple arity mismatch for generator " + name);
        table[{w, local}] = entry.at(2).get<int>() != 0;
      }
      val[name] = element_from(space, dims, [&](std::size_t w, const std::vector<int>& local) {
        auto it = table.find({w, local});
        return it == table.end() ? def : it->second;
      });
    }
  } catch (const json::exception& e) {
    throw Error(std::string("valuation: ") + e.what());
  }
  return val;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Evaluator {
 public:
  Evaluator(const SpacePtr& space, const Valuation& val) : space_(space), val_(val) {}

  const AlgebraElement& run(const Term& t) {
    if (auto it = cache_.find(t); it != cache_.end()) return it->second;
    AlgebraElement out;
    switch (t.op()) {
      case Op::Zero: out = AlgebraElement(space_, false); break;
      case Op::One: out = AlgebraElement(space_, true); break;
      case Op::Gen: {
        auto it = val_.find(t.name());
        if (it == val_.end()) throw SignatureError("no valuation for generator '" + t.name() + "'");
        if (it->second.space() != space_) throw Error("valuation for '" + t.name() + "' lives in another space");
        out = it->second;
        break;
      }
      case Op::Not: out = complement(run(t.arg())); break;
      case Op::Or: {
        AlgebraElement a = run(t.arg(0));
        out = join(a, run(t.arg(1)));
        break;
      }
      case Op::And: {
        AlgebraElement a = run(t.arg(0));
        out = meet(a, run(t.arg(1)));
        break;
      }
      case Op::Box: out = box(run(t.arg())); break;
      case Op::Cyl: out = cyl(t.index(), run(t.arg())); break;
      case Op::Subst: out = subst(t.over(), t.from(), run(t.arg())); break;
    }
    return cache_.emplace(t, std::move(out)).first->second;
  }

 private:
  const SpacePtr& space_;
  const Valuation& val_;
  std::unordered_map<Term, AlgebraElement, TermHash> cache_;
};

}  // namespace

AlgebraElement eval(const Term& t, const SpacePtr& space, const Valuation& val) {
  if (t.max_index() >= space->width()) {
    throw Error("width " + std::to_string(space->width()) + " too small for index " + std::to_string(t.max_index()));
  }
  Evaluator ev(space, val);
  return ev.run(t);
}

std::vector<AlgebraElement> eval_all(const std::vector<Term>& ts, const SpacePtr& space, const Valuation& val) {
  Evaluator ev(space, val);
  std::vector<AlgebraElement> out;
  for (const Term& t : ts) {
    if (t.max_index() >= space->width()) {
      throw Error("width " + std::to_string(space->width()) + " too small for index " + std::to_string(t.max_index()));
    }
    out.push_back(ev.run(t));
  }
  return out;
}

AlgebraElement eval(const Term& t, const KripkeSystem& k, const Valuation& val, int width) {
  if (val.empty()) return eval(t, make_space(k, width), val);
  const SpacePtr& space = val.begin()->second.space();
  if (space->width() != width || space->worlds() != k.world_count()) {
    throw Error("valuation does not match system and width");
  }
  return eval(t, space, val);
}

// ---------------------------------------------------------------------------
// Axioms

bool AxiomReport::all_pass() const {
  return std::all_of(axioms.begin(), axioms.end(),
                     [](const AxiomResult& r) { return r.name == "ax1-as-printed" || r.pass; });
}

const AxiomResult* AxiomReport::find(const std::string& name) const {
  for (const auto& r : axioms) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::vector<std::string> axiom_names() {
  return {"ax1", "ax2", "ax3", "ax4", "ax5", "ax6", "ax7", "ax8", "ax9", "ax10", "ax11", "ax12", "ax13", "ax14"};
}

namespace {

using E = AlgebraElement;

struct Indices {
  Index i, j, k, l;
};

// Returns nullopt when the side condition excludes the instance, otherwise
// whether the two sides agree.
using AxiomFn = std::function<std::optional<bool>(const E&, const E&, const Indices&)>;

std::vector<std::pair<std::string, AxiomFn>> axiom_table() {
  // s_a^b (subscript a, superscript b) is subst(over=b, from=a).
  return {
      {"ax1",
       [](const E& x, const E& y, const Indices&) -> std::optional<bool> {
         E top(x.space(), true);
         return box(top) == top && box(meet(x, y)) == meet(box(x), box(y));
       }},
      {"ax2", [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         E bottom(x.space(), false);
         return cyl(n.j, bottom) == bottom;
       }},
      {"ax3", [](const E& x, const E&, const Indices& n) -> std::optional<bool> { return leq(x, cyl(n.i, x)); }},
      {"ax4",
       [](const E& x, const E& y, const Indices& n) -> std::optional<bool> {
         return cyl(n.i, meet(x, cyl(n.i, y))) == meet(cyl(n.i, x), cyl(n.i, y));
       }},
      {"ax5",
       [](const E& x, const E& y, const Indices& n) -> std::optional<bool> {
         return cyl(n.i, join(x, y)) == join(cyl(n.i, x), cyl(n.i, y));
       }},
      {"ax6",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         return cyl(n.i, cyl(n.j, x)) == cyl(n.j, cyl(n.i, x));
       }},
      {"ax7", [](const E& x, const E&, const Indices& n) -> std::optional<bool> { return subst(n.i, n.i, x) == x; }},
      {"ax8",
       [](const E& x, const E& y, const Indices& n) -> std::optional<bool> {
         return subst(n.i, n.j, join(x, y)) == join(subst(n.i, n.j, x), subst(n.i, n.j, y)) &&
                subst(n.i, n.j, complement(x)) == complement(subst(n.i, n.j, x));
       }},
      {"ax9",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         return subst(n.i, n.j, cyl(n.i, x)) == cyl(n.i, x);
       }},
      {"ax10",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         if (n.i == n.j) return std::nullopt;
         return cyl(n.i, subst(n.i, n.j, x)) == subst(n.i, n.j, x);
       }},
      {"ax11",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         if (n.k == n.i || n.k == n.j) return std::nullopt;
         return subst(n.i, n.j, cyl(n.k, x)) == cyl(n.k, subst(n.i, n.j, x));
       }},
      {"ax12",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         return cyl(n.i, subst(n.j, n.i, x)) == cyl(n.j, subst(n.i, n.j, x));
       }},
      {"ax13",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         std::set<Index> distinct{n.i, n.j, n.k, n.l};
         if (distinct.size() != 4) return std::nullopt;
         return subst(n.j, n.i, subst(n.l, n.k, x)) == subst(n.l, n.k, subst(n.j, n.i, x));
       }},
      {"ax14",
       [](const E& x, const E&, const Indices& n) -> std::optional<bool> {
         return subst(n.l, n.i, subst(n.j, n.l, x)) == subst(n.l, n.i, subst(n.j, n.i, x));
       }},
      {"ax1-as-printed",
       [](const E& x, const E& y, const Indices&) -> std::optional<bool> {
         E lhs = box(join(complement(x), y));
         E rhs = join(complement(box(x)), complement(box(y)));
         return leq(lhs, rhs);
       }},
  };
}

std::string describe_instance(const Space& s, const Indices& n) {
  return "i=" + std::to_string(n.i) + " j=" + std::to_string(n.j) + " k=" + std::to_string(n.k) +
         " l=" + std::to_string(n.l) + " on " + std::to_string(s.worlds()) + " worlds, |D|=" +
         std::to_string(s.system().domain.size());
}

}  // namespace

AxiomReport check_axioms(const KripkeSystem& k, int width, const AxiomCheckOptions& opts) {
  if (width < 1) throw Error("axiom check needs width >= 1");
  SpacePtr space = make_space(k, width);
  std::mt19937_64 rng(opts.seed);
  AxiomReport report;

  // Exhaustive element enumeration when affordable.
  std::vector<E> all;
  const std::size_t cells = space->cells();
  if (opts.exhaustive_pairs > 0 && cells < 20) {
    const std::size_t count = std::size_t{1} << cells;
    if (count * count <= opts.exhaustive_pairs) {
      for (std::size_t mask = 0; mask < count; ++mask) {
        E e(space, false);
        std::size_t bit = 0;
        for (std::size_t w = 0; w < space->worlds(); ++w) {
          for (std::size_t t = 0; t < space->tuples(); ++t) {
            if (space->valid(w, t)) e.set(w, t, ((mask >> bit++) & 1u) != 0);
          }
        }
        all.push_back(std::move(e));
      }
    }
  }

  std::vector<Indices> index_combos;
  for (Index i = 0; i < width; ++i)
    for (Index j = 0; j < width; ++j)
      for (Index kk = 0; kk < width; ++kk)
        for (Index l = 0; l < width; ++l) index_combos.push_back({i, j, kk, l});

  for (const auto& [name, fn] : axiom_table()) {
    if (name == "ax1-as-printed" && !opts.include_printed_ax1) continue;
    AxiomResult res;
    res.name = name;
    auto check = [&](const E& x, const E& y, const Indices& n) {
      std::optional<bool> ok = fn(x, y, n);
      if (!ok) {
        ++res.skipped;
        return true;
      }
      ++res.instances;
      if (!*ok) {
        res.pass = false;
        res.counterexample = describe_instance(*space, n);
        return false;
      }
      return true;
    };
    if (!all.empty()) {
      bool go = true;
      for (const E& x : all) {
        for (const E& y : all) {
          for (const Indices& n : index_combos) {
            if (!(go = check(x, y, n))) break;
          }
          if (!go) break;
        }
        if (!go) break;
      }
    } else {
      for (std::size_t trial = 0; trial < opts.trials; ++trial) {
        E x = random_element(space, rng);
        E y = random_element(space, rng);
        Indices n{static_cast<Index>(uniform(rng, static_cast<std::size_t>(width))),
                  static_cast<Index>(uniform(rng, static_cast<std::size_t>(width))),
                  static_cast<Index>(uniform(rng, static_cast<std::size_t>(width))),
                  static_cast<Index>(uniform(rng, static_cast<std::size_t>(width)))};
        if (!check(x, y, n)) break;
      }
    }
    report.axioms.push_back(std::move(res));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Enumeration

bool frame_has(const std::vector<std::vector<bool>>& r, const FrameFlags& flags) {
  const std::size_t n = r.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (flags.reflexive && !r[x][x]) return false;
    if (flags.serial && std::none_of(r[x].begin(), r[x].end(), [](bool b) { return b; })) return false;
    if (flags.transitive) {
      for (std::size_t y = 0; y < n; ++y) {
        if (!r[x][y]) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (r[y][z] && !r[x][z]) return false;
        }
      }
    }
  }
  return true;
}

void for_each_system(int max_worlds, int max_domain, const FrameFlags& flags,
                     const std::function<bool(const KripkeSystem&)>& fn) {
  for (int n = 1; n <= max_worlds; ++n) {
    const std::size_t un = static_cast<std::size_t>(n);
    for (int d = 1; d <= max_domain; ++d) {
      const std::size_t subsets = (std::size_t{1} << d) - 1;  // non-empty
      const std::size_t full = subsets;
      for (std::size_t rel = 0; rel < (std::size_t{1} << (un * un)); ++rel) {
        KripkeSystem k = KripkeSystem::constant(un, static_cast<std::size_t>(d), {});
        for (std::size_t a = 0; a < un; ++a)
          for (std::size_t b = 0; b < un; ++b) k.access[a][b] = ((rel >> (a * un + b)) & 1u) != 0;
        if (!frame_has(k.access, flags)) continue;
        std::vector<std::size_t> choice(un, 0);
        while (true) {
          std::size_t uni = 0;
          for (std::size_t w = 0; w < un; ++w) uni |= choice[w] + 1;
          bool monotone = true;
          for (std::size_t a = 0; a < un && monotone; ++a)
            for (std::size_t b = 0; b < un && monotone; ++b)
              if (k.access[a][b] && ((choice[a] + 1) & ~(choice[b] + 1)) != 0) monotone = false;
          if (uni == full && monotone) {
            for (std::size_t w = 0; w < un; ++w) {
              k.world_domain[w].clear();
              for (int e = 0; e < d; ++e)
                if (((choice[w] + 1) >> e) & 1u) k.world_domain[w].push_back(e);
            }
            if (!fn(k)) return;
          }
          std::size_t w = 0;
          while (w < un && ++choice[w] == subsets) choice[w++] = 0;
          if (w == un) break;
        }
      }
    }
  }
}

std::size_t count_systems(int max_worlds, int max_domain, const FrameFlags& flags) {
  std::size_t count = 0;
  for_each_system(max_worlds, max_domain, flags, [&](const KripkeSystem&) {
    ++count;
    return true;
  });
  return count;
}

KripkeSystem random_system(std::mt19937_64& rng, int max_worlds, int max_domain, const FrameFlags& flags) {
  const std::size_t n = 1 + uniform(rng, static_cast<std::size_t>(max_worlds));
  const std::size_t d = 1 + uniform(rng, static_cast<std::size_t>(max_domain));
  KripkeSystem k = KripkeSystem::constant(n, d, {});
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) k.access[a][b] = (rng() & 1u) != 0;
  if (flags.reflexive)
    for (std::size_t a = 0; a < n; ++a) k.access[a][a] = true;
  if (flags.serial) {
    for (std::size_t a = 0; a < n; ++a) {
      if (std::none_of(k.access[a].begin(), k.access[a].end(), [](bool b) { return b; })) {
        k.access[a][uniform(rng, n)] = true;
      }
    }
  }
  if (flags.transitive) {
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (k.access[a][m] && k.access[m][b]) k.access[a][b] = true;
  }
  std::vector<std::uint32_t> masks(n);
  for (auto& m : masks) m = static_cast<std::uint32_t>(1 + uniform(rng, (std::size_t{1} << d) - 1));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (k.access[a][b] && (masks[a] & ~masks[b]) != 0) {
          masks[b] |= masks[a];
          changed = true;
        }
  }
  for (std::size_t w = 0; w < n; ++w) {
    k.world_domain[w].clear();
    for (std::size_t e = 0; e < d; ++e)
      if ((masks[w] >> e) & 1u) k.world_domain[w].push_back(static_cast<int>(e));
  }
  return k;
}

}  // namespace msa
