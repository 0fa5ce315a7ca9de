#include "msa/transform.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

namespace msa {

FiniteTransformation::FiniteTransformation(const std::map<Index, Index>& entries) {
  for (const auto& [i, j] : entries) {
    if (i < 0 || j < 0) throw Error("negative index in transformation");
    if (i != j) map_.emplace(i, j);
  }
}

FiniteTransformation FiniteTransformation::replacement(Index i, Index j) {
  return FiniteTransformation(std::map<Index, Index>{{i, j}});
}

FiniteTransformation FiniteTransformation::transposition(Index i, Index j) {
  return FiniteTransformation(std::map<Index, Index>{{i, j}, {j, i}});
}

Index FiniteTransformation::operator()(Index i) const {
  auto it = map_.find(i);
  return it == map_.end() ? i : it->second;
}

IndexSet FiniteTransformation::support() const {
  IndexSet out;
  for (const auto& [i, j] : map_) out.insert(i);
  return out;
}

std::vector<Index> FiniteTransformation::image() const {
  std::vector<Index> out;
  out.reserve(map_.size());
  for (const auto& [i, j] : map_) out.push_back(j);
  return out;
}

FiniteTransformation FiniteTransformation::restricted(const IndexSet& keep) const {
  std::map<Index, Index> out;
  for (const auto& [i, j] : map_) {
    if (keep.count(i) != 0) out.emplace(i, j);
  }
  return FiniteTransformation(out);
}

FiniteTransformation compose(const FiniteTransformation& sigma, const FiniteTransformation& tau) {
  std::map<Index, Index> out;
  for (Index i : sigma.support()) out[i] = sigma(tau(i));
  for (Index i : tau.support()) out[i] = sigma(tau(i));
  return FiniteTransformation(out);
}

FiniteTransformation update(const FiniteTransformation& tau, Index i, Index j) {
  std::map<Index, Index> out = tau.entries();
  out[i] = j;
  return FiniteTransformation(out);
}

std::string to_json(const FiniteTransformation& t) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [i, j] : t.entries()) pairs.push_back({i, j});
  return nlohmann::json{{"map", pairs}}.dump();
}

FiniteTransformation transformation_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("transformation: ") + e.what(), e.byte);
  }
  std::map<Index, Index> entries;
  try {
    for (const auto& pair : doc.at("map")) {
      Index i = pair.at(0).get<Index>();
      Index j = pair.at(1).get<Index>();
      if (entries.count(i) != 0) throw Error("transformation maps index " + std::to_string(i) + " twice");
      entries[i] = j;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("transformation: ") + e.what());
  }
  return FiniteTransformation(entries);
}

SubstChain decompose_s_tau(const FiniteTransformation& tau, const IndexSet& blocked) {
  std::vector<Index> temps;
  Index candidate = 0;
  while (temps.size() < tau.entries().size()) {
    if (blocked.count(candidate) == 0) temps.push_back(candidate);
    ++candidate;
  }
  SubstChain chain;
  std::size_t k = 0;
  for (const auto& [u, v] : tau.entries()) chain.push_back({temps[k++], v});
  k = 0;
  for (const auto& [u, v] : tau.entries()) chain.push_back({u, temps[k++]});
  return chain;
}

Term apply_chain(const SubstChain& chain, Term t) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) t = subst(it->over, it->from, std::move(t));
  return t;
}

Term s_tau(const FiniteTransformation& tau, const Term& t, const Signature& sig) {
  IndexSet blocked = free_indices(t, sig);
  for (const auto& [u, v] : tau.entries()) {
    blocked.insert(u);
    blocked.insert(v);
  }
  return apply_chain(decompose_s_tau(tau, blocked), t);
}

FiniteTransformation chain_action(const SubstChain& chain) {
  FiniteTransformation sigma;
  for (const SubstPair& p : chain) sigma = update(sigma, p.over, sigma(p.from));
  return sigma;
}

SubstChain chain_for(const FiniteTransformation& tau, const IndexSet& avoid) {
  std::map<Index, Index> pending = tau.entries();
  SubstChain chain;
  while (!pending.empty()) {
    std::optional<Index> pick;
    for (const auto& [u, v] : pending) {
      bool read_by_other = std::any_of(pending.begin(), pending.end(),
                                       [u = u](const auto& e) { return e.second == u; });
      if (!read_by_other) {
        pick = u;
        break;
      }
    }
    if (!pick) {
      IndexSet blocked = avoid;
      for (const auto& [u, v] : tau.entries()) {
        blocked.insert(u);
        blocked.insert(v);
      }
      return decompose_s_tau(tau, blocked);
    }
    chain.push_back({*pick, pending.at(*pick)});
    pending.erase(*pick);
  }
  return chain;
}

// ---------------------------------------------------------------------------
// ShiftMap

ShiftMap::ShiftMap(std::vector<long> table, long shift) : table_(std::move(table)), shift_(shift) {
  for (long v : table_) {
    if (v < 0) throw Error("transformation value below zero");
  }
  if (static_cast<long>(table_.size()) + shift_ < 0) throw Error("transformation leaves the naturals");
  normalize();
}

void ShiftMap::normalize() {
  while (!table_.empty() && table_.back() == static_cast<long>(table_.size()) - 1 + shift_) table_.pop_back();
}

ShiftMap ShiftMap::suc() { return ShiftMap({}, 1); }
ShiftMap ShiftMap::pred() { return ShiftMap({0}, -1); }

ShiftMap ShiftMap::rep(long i, long j) {
  std::vector<long> table(static_cast<std::size_t>(i) + 1);
  for (long x = 0; x <= i; ++x) table[static_cast<std::size_t>(x)] = x;
  table[static_cast<std::size_t>(i)] = j;
  return ShiftMap(std::move(table), 0);
}

ShiftMap ShiftMap::swap(long i, long j) {
  long top = std::max(i, j);
  std::vector<long> table(static_cast<std::size_t>(top) + 1);
  for (long x = 0; x <= top; ++x) table[static_cast<std::size_t>(x)] = x;
  std::swap(table[static_cast<std::size_t>(i)], table[static_cast<std::size_t>(j)]);
  return ShiftMap(std::move(table), 0);
}

long ShiftMap::operator()(long x) const {
  if (x < static_cast<long>(table_.size())) return table_[static_cast<std::size_t>(x)];
  return x + shift_;
}

std::vector<long> ShiftMap::support() const {
  std::vector<long> out;
  for (std::size_t x = 0; x < table_.size(); ++x) {
    if (table_[x] != static_cast<long>(x)) out.push_back(static_cast<long>(x));
  }
  return out;
}

std::vector<long> ShiftMap::missing_from_range() const {
  long tail_start = static_cast<long>(table_.size()) + shift_;
  std::set<long> hit(table_.begin(), table_.end());
  std::vector<long> out;
  for (long m = 0; m < tail_start; ++m) {
    if (hit.count(m) == 0) out.push_back(m);
  }
  return out;
}

ShiftMap ShiftMap::updated(long i, long j) const {
  std::vector<long> table = table_;
  while (static_cast<long>(table.size()) <= i) table.push_back(static_cast<long>(table.size()) + shift_);
  table[static_cast<std::size_t>(i)] = j;
  return ShiftMap(std::move(table), shift_);
}

ShiftMap ShiftMap::reset_outside_range_of(const ShiftMap& other) const {
  ShiftMap out = *this;
  for (long m : other.missing_from_range()) out = out.updated(m, m);
  return out;
}

std::string ShiftMap::describe(long window) const {
  std::ostringstream os;
  os << "[";
  for (long x = 0; x < window; ++x) os << (x ? " " : "") << (*this)(x);
  os << " ...]";
  if (shift_ != 0) os << " shift " << shift_;
  return os.str();
}

ShiftMap compose(const ShiftMap& f, const ShiftMap& g) {
  long k = std::max<long>({static_cast<long>(g.threshold()), static_cast<long>(f.threshold()) - g.shift(), 0});
  std::vector<long> table(static_cast<std::size_t>(k));
  for (long x = 0; x < k; ++x) table[static_cast<std::size_t>(x)] = f(g(x));
  return ShiftMap(std::move(table), f.shift() + g.shift());
}

ShiftMap power(const ShiftMap& f, int n) {
  ShiftMap out;
  for (int k = 0; k < n; ++k) out = compose(f, out);
  return out;
}

std::string SemigroupRule::label() const {
  if (name == "rep") return "[" + std::to_string(i) + "|" + std::to_string(j) + "]";
  if (name == "swap") return "[" + std::to_string(i) + "," + std::to_string(j) + "]";
  return name;
}

SemigroupSpec parse_semigroup_spec(std::string_view text) {
  SemigroupSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto number = [&](std::istringstream& ls) {
    long v = 0;
    if (!(ls >> v) || v < 0) throw ParseError("expected a natural number", lineno);
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "window") {
      spec.window = number(ls);
    } else if (word == "depth") {
      spec.depth = static_cast<int>(number(ls));
    } else if (word == "suc" || word == "pred" || word == "id") {
      spec.generators.push_back({word, 0, 0});
    } else if (word == "rep" || word == "swap") {
      long i = number(ls);
      long j = number(ls);
      spec.generators.push_back({word, i, j});
    } else if (word == "rep-all" || word == "swap-all") {
      long n = number(ls);
      std::string rule = word == "rep-all" ? "rep" : "swap";
      for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
          if (rule == "swap" && j <= i) continue;
          spec.generators.push_back({rule, i, j});
        }
      }
    } else {
      throw ParseError("unknown semigroup directive '" + word + "'", lineno);
    }
    std::string extra;
    if (ls >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
  }
  return spec;
}

ShiftMap rule_map(const SemigroupRule& rule, long window) {
  if (rule.name == "suc") return ShiftMap::suc();
  if (rule.name == "pred") return ShiftMap::pred();
  if (rule.name == "id") return ShiftMap::identity();
  if (rule.name == "rep" || rule.name == "swap") {
    if (rule.i >= window || rule.j >= window) {
      throw Error("window " + std::to_string(window) + " too small for rule " + rule.label());
    }
    return rule.name == "rep" ? ShiftMap::rep(rule.i, rule.j) : ShiftMap::swap(rule.i, rule.j);
  }
  throw Error("unknown rule '" + rule.name + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive-at-bound";
  }
  return "?";
}

namespace {

struct Fragment {
  std::vector<ShiftMap> elements;  // discovery order
  std::set<ShiftMap> members;
  bool closed = false;
};

constexpr std::size_t kFragmentCap = 200000;

// Words of length 1..depth over the generators.
Fragment generate(const std::vector<ShiftMap>& gens, int depth) {
  Fragment frag;
  std::vector<ShiftMap> frontier;
  for (const ShiftMap& g : gens) {
    if (frag.members.insert(g).second) {
      frag.elements.push_back(g);
      frontier.push_back(g);
    }
  }
  for (int d = 2; d <= depth && !frontier.empty(); ++d) {
    std::vector<ShiftMap> next;
    for (const ShiftMap& g : gens) {
      for (const ShiftMap& w : frontier) {
        ShiftMap h = compose(g, w);
        if (frag.members.insert(h).second) {
          frag.elements.push_back(h);
          next.push_back(h);
          if (frag.elements.size() > kFragmentCap) throw BudgetExceeded("semigroup fragment exceeds cap");
        }
      }
    }
    frontier = std::move(next);
  }
  if (frontier.empty()) {
    frag.closed = true;
  } else {
    // One more level decides closure.
    bool grew = false;
    for (const ShiftMap& g : gens) {
      for (const ShiftMap& w : frontier) {
        if (frag.members.count(compose(g, w)) == 0) {
          grew = true;
          break;
        }
      }
      if (grew) break;
    }
    frag.closed = !grew;
  }
  return frag;
}

}  // namespace

RichnessReport rich_check(const SemigroupSpec& spec) {
  if (spec.window <= 0 || spec.depth <= 0) throw Error("richness bounds must be positive");
  if (spec.generators.empty()) throw Error("semigroup needs at least one generator");
  std::vector<ShiftMap> gens;
  for (const SemigroupRule& r : spec.generators) gens.push_back(rule_map(r, spec.window));

  Fragment frag = generate(gens, spec.depth);
  // Membership lookups may use one extra composition.
  Fragment lookup = frag.closed ? frag : generate(gens, spec.depth + 1);
  const long w = spec.window;

  RichnessReport report;
  report.fragment_size = frag.elements.size();
  report.fragment_closed = frag.closed;
  report.depth = spec.depth;
  report.window = w;
  report.note =
      "condition (3) read as: reset every index outside Rg(sigma) to the identity; "
      "quantifiers over indices range over the window";

  // (1) closure under point updates
  {
    ConditionResult c{1, Verdict::Pass, {}};
    std::size_t missing = 0;
    std::string first;
    for (const ShiftMap& tau : frag.elements) {
      for (long i = 0; i < w; ++i) {
        for (long j = 0; j < w; ++j) {
          ShiftMap h = tau.updated(i, j);
          if (lookup.members.count(h) == 0) {
            if (missing++ == 0) {
              first = "tau=" + tau.describe(w) + " [" + std::to_string(i) + "|" + std::to_string(j) + "]";
            }
          }
        }
      }
    }
    if (missing == 0) {
      c.detail = "all point updates found";
    } else if (frag.closed) {
      c.verdict = Verdict::Fail;
      c.detail = "semigroup is closed and misses " + first;
    } else {
      c.verdict = Verdict::Inconclusive;
      c.detail = std::to_string(missing) + " updates not reached within depth; first " + first;
    }
    report.conditions.push_back(c);
  }

  // (2) split pair
  std::optional<std::pair<ShiftMap, ShiftMap>> pair;
  for (const ShiftMap& sigma : frag.elements) {
    if (sigma.missing_from_range().empty()) continue;
    for (const ShiftMap& pi : frag.elements) {
      if (compose(pi, sigma) == ShiftMap::identity()) {
        pair.emplace(sigma, pi);
        break;
      }
    }
    if (pair) break;
  }
  {
    ConditionResult c{2, Verdict::Pass, {}};
    if (pair) {
      c.detail = "sigma=" + pair->first.describe(w) + " pi=" + pair->second.describe(w);
    } else {
      c.verdict = Verdict::Fail;
      c.detail = frag.closed ? "no sigma,pi with pi o sigma = Id and Rg(sigma) != N in the semigroup"
                             : "no sigma,pi with pi o sigma = Id and Rg(sigma) != N within bound (" +
                                   std::to_string(frag.elements.size()) + " elements)";
    }
    report.conditions.push_back(c);
  }

  // (3) conjugation closure
  {
    ConditionResult c{3, Verdict::Inconclusive, {}};
    if (!pair) {
      c.detail = "no witness pair for condition (2)";
    } else {
      const auto& [sigma, pi] = *pair;
      std::size_t missing = 0;
      std::string first;
      for (const ShiftMap& tau : frag.elements) {
        ShiftMap h = compose(compose(sigma, tau), pi).reset_outside_range_of(sigma);
        if (lookup.members.count(h) == 0 && missing++ == 0) first = h.describe(w);
      }
      if (missing == 0) {
        c.verdict = Verdict::Pass;
        c.detail = "all conjugates found";
      } else if (frag.closed) {
        c.verdict = Verdict::Fail;
        c.detail = "semigroup is closed and misses " + first;
      } else {
        c.detail = std::to_string(missing) + " conjugates not reached within depth; first " + first;
      }
    }
    report.conditions.push_back(c);
  }
  return report;
}

StrongRichnessReport strongly_rich_check(const SemigroupRule& sigma_rule, const SemigroupRule& pi_rule, int n_max,
                                         long window) {
  ShiftMap sigma = rule_map(sigma_rule, window);
  ShiftMap pi = rule_map(pi_rule, window);
  StrongRichnessReport report;
  report.window = window;
  report.all_pass = true;
  for (int n = 0; n <= n_max; ++n) {
    StrongRichnessRow row;
    row.n = n;
    ShiftMap sn = power(sigma, n);
    ShiftMap h = compose(sn, power(pi, n));
    if (!h.finite_support()) {
      row.verdict = Verdict::Fail;
      row.detail = "support of sigma^n o pi^n is infinite (shift " + std::to_string(h.shift()) + ")";
    } else {
      row.support = h.support();
      std::vector<long> outside = sn.missing_from_range();
      std::set<long> complement(outside.begin(), outside.end());
      for (long x : row.support) {
        if (x >= window) {
          row.verdict = Verdict::Fail;
          row.detail = "support point " + std::to_string(x) + " outside window";
          break;
        }
        if (complement.count(x) == 0) {
          row.verdict = Verdict::Fail;
          row.detail = "support point " + std::to_string(x) + " lies in Rng(sigma^n)";
          break;
        }
      }
    }
    if (row.verdict != Verdict::Pass) report.all_pass = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace msa
