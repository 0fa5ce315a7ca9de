#include "msa/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "msa/correspond.hpp"
#include "msa/interp.hpp"
#include "msa/kripke.hpp"
#include "msa/prover.hpp"
#include "msa/rewrite.hpp"
#include "msa/saturate.hpp"
#include "msa/transform.hpp"

namespace msa::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string logic = "K";
  std::string sig_path;
  std::string formula;
  std::string file;
  std::string right;
  std::vector<std::string> x1, x2;
  int max_worlds = 0;  // 0: command default
  int max_domain = 0;
  int width = 0;
  int depth = 0;
  std::size_t trials = 0;
  int domain_bound = 2;
  std::uint64_t seed = 1;
  std::string out_path;
  bool structured = false;
  // command specific
  std::string name;
  std::size_t systems = 200;
  std::string schema;
  bool iso = false;
  std::string sigma = "suc", pi = "pred";
  int n_max = 5;
  long window = 16;
  std::string countermodel_path;
  std::size_t budget = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Generators seen in the text, declared without coordinates.
Signature infer_signature(const std::vector<std::string>& texts) {
  Signature sig;
  for (const auto& t : texts) {
    for (const auto& g : generators(parse_unchecked(t))) sig.declare(g, {});
  }
  return sig;
}

Signature signature_for(const RunConfig& c, const std::vector<std::string>& texts) {
  if (!c.sig_path.empty()) return parse_signature(read_file(c.sig_path));
  return infer_signature(texts);
}

// Formulas from --formula or, one per non-empty line, from --file.
std::vector<std::string> formula_texts(const RunConfig& c) {
  std::vector<std::string> out;
  if (!c.formula.empty()) out.push_back(c.formula);
  if (!c.file.empty()) {
    std::istringstream in(read_file(c.file));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t")] != '#') {
        out.push_back(line);
      }
    }
  }
  if (out.empty()) throw CLI::ValidationError("a formula is required (--formula or --file)");
  return out;
}

int or_default(int v, int d) { return v > 0 ? v : d; }

struct Output {
  json doc;
  std::ostringstream text;
  int code = Ok;
};

// ---------------------------------------------------------------------------

void cmd_normalize(const RunConfig& c, Output& o) {
  auto texts = formula_texts(c);
  Signature sig = signature_for(c, texts);
  o.doc["results"] = json::array();
  for (const auto& s : texts) {
    NormalizeStats stats;
    Term t = parse(s, sig);
    Term n = normalize(t, sig, {}, &stats);
    o.doc["results"].push_back({{"input", print(t)}, {"normal_form", print(n)}, {"fired", stats.fired}});
    o.text << pretty(t) << "\n  => " << pretty(n) << "\n";
  }
}

Bounds bounds_of(const RunConfig& c) {
  Bounds b;
  b.max_worlds = or_default(c.max_worlds, b.max_worlds);
  b.max_domain = or_default(c.max_domain, b.max_domain);
  b.max_indices = or_default(c.width, b.max_indices);
  return b;
}

void cmd_check_identity(const RunConfig& c, Output& o) {
  std::vector<std::string> names;
  if (!c.name.empty()) {
    if (!is_identity_name(c.name)) throw CLI::ValidationError("unknown identity '" + c.name + "'");
    names.push_back(c.name);
  } else {
    for (const auto& n : identity_names()) {
      if (n != "ax1-as-printed") names.push_back(n);
    }
  }
  const Bounds b = bounds_of(c);
  const std::size_t trials = c.trials ? c.trials : 200;
  IdentityOptions opts;
  opts.seed = c.seed;
  opts.term_depth = or_default(c.depth, opts.term_depth);
  o.doc["bounds"]["trials"] = trials;
  o.doc["bounds"]["term_depth"] = opts.term_depth;
  o.doc["identities"] = json::array();
  for (const auto& n : names) {
    IdentityReport r = check_identity(n, trials, b, opts);
    o.doc["identities"].push_back({{"name", r.name},
                                   {"statement", r.statement},
                                   {"reading", r.reading},
                                   {"pass", r.pass},
                                   {"checked", r.checked},
                                   {"skipped", r.skipped},
                                   {"exhaustive", r.exhaustive},
                                   {"counterexample", r.counterexample}});
    o.text << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.statement << "  (" << r.checked << " checked, "
           << r.skipped << " skipped)\n";
    if (!r.pass) {
      o.text << "  " << r.counterexample << "\n";
      o.code = Negative;
    }
  }
}

void cmd_check_axioms(const RunConfig& c, Output& o) {
  const int mw = or_default(c.max_worlds, 3), md = or_default(c.max_domain, 3), width = or_default(c.width, 3);
  AxiomCheckOptions opts;
  opts.trials = c.trials ? c.trials : 100;
  std::vector<KripkeSystem> systems;
  if (!c.file.empty()) {
    systems.push_back(system_from_json(read_file(c.file)));
    auto problems = validate_system(systems.back());
    if (!problems.empty()) throw Error("invalid system: " + problems.front());
  } else {
    std::mt19937_64 rng(c.seed);
    for (std::size_t k = 0; k < c.systems; ++k) systems.push_back(random_system(rng, mw, md));
  }
  o.doc["bounds"]["systems"] = systems.size();
  o.doc["bounds"]["trials"] = opts.trials;
  o.doc["bounds"]["width"] = width;
  o.doc["bounds"]["max_worlds"] = mw;
  o.doc["bounds"]["max_domain"] = md;
  std::map<std::string, std::size_t> instances, failures;
  std::map<std::string, std::string> example;
  std::vector<std::string> order;
  for (std::size_t k = 0; k < systems.size(); ++k) {
    opts.seed = c.seed * 1000003u + k;
    AxiomReport r = check_axioms(systems[k], width, opts);
    for (const auto& a : r.axioms) {
      if (!instances.count(a.name)) order.push_back(a.name);
      instances[a.name] += a.instances;
      if (!a.pass) {
        ++failures[a.name];
        if (!example.count(a.name)) example[a.name] = a.counterexample;
      }
    }
  }
  o.doc["axioms"] = json::array();
  for (const auto& n : order) {
    const bool printed = n == "ax1-as-printed";
    const bool pass = failures[n] == 0;
    o.doc["axioms"].push_back({{"name", n},
                               {"pass", pass},
                               {"instances", instances[n]},
                               {"failing_systems", failures[n]},
                               {"counterexample", example.count(n) ? example[n] : ""},
                               {"expected_to_fail", printed},
                               {"vacuous", instances[n] == 0}});
    o.text << (pass ? "PASS " : "FAIL ") << n << "  (" << instances[n] << " instances, " << failures[n]
           << " failing systems)" << (printed ? "  [expected to fail]" : "")
           << (instances[n] == 0 ? "  [vacuous at this width]" : "") << "\n";
    if (!pass) o.text << "  " << example[n] << "\n";
    if (!pass && !printed) o.code = Negative;
  }
}

void cmd_prove(const RunConfig& c, Output& o) {
  auto texts = formula_texts(c);
  Signature sig = signature_for(c, texts);
  const Logic logic = logic_from_name(c.logic);
  o.doc["logic"] = logic.name;
  o.doc["bounds"]["domain_bound"] = c.domain_bound;
  if (c.budget) o.doc["bounds"]["step_budget"] = c.budget;
  o.doc["results"] = json::array();
  json models = json::array();
  for (const auto& s : texts) {
    Term t = parse(s, sig);
    json r{{"formula", print(t)}};
    std::optional<PropModel> cm;
    bool provable;
    if (!is_quantified(t, sig)) {
      ProverOptions po;
      if (c.budget) po.step_budget = c.budget;
      ProofResult p = prove(logic, Sequent{{}, {t}}, po);
      provable = p.provable;
      r["rules"] = p.rule_log();
      r["search_steps"] = p.search_steps;
      cm = p.countermodel;
    } else {
      ProverOptions po;
      if (c.budget) po.step_budget = c.budget;
      ConsequenceResult q = consequence({}, {t}, logic, c.domain_bound, sig, po);
      provable = q.holds;
      r["ground_sequents"] = q.proofs;
      if (!q.holds) {
        r["failing_domain"] = q.failing_domain;
        r["failing_tuple"] = q.failing_tuple;
      }
      cm = q.countermodel;
    }
    r["verdict"] = provable ? "Provable" : "Refuted";
    o.text << (provable ? "Provable" : "Refuted") << " in " << logic.name << ": " << pretty(t) << "\n";
    if (cm) {
      r["countermodel"] = json::parse(model_to_json(*cm));
      models.push_back(r["countermodel"]);
      o.text << "  countermodel: " << cm->size() << " world(s)\n";
      for (std::size_t w = 0; w < cm->size(); ++w) {
        o.text << "    w" << w << (w == cm->root ? " (root)" : "") << " ->";
        for (std::size_t v = 0; v < cm->size(); ++v)
          if (cm->access[w][v]) o.text << " w" << v;
        o.text << "  true:";
        for (const auto& [a, vals] : cm->truth)
          if (vals[w]) o.text << " " << a;
        o.text << "\n";
      }
    }
    if (!provable) o.code = Negative;
    o.doc["results"].push_back(r);
  }
  if (!c.countermodel_path.empty() && !models.empty()) {
    std::ofstream f(c.countermodel_path);
    if (!f) throw Error("cannot write " + c.countermodel_path);
    f << (models.size() == 1 ? models[0] : models).dump(2) << "\n";
  }
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

void cmd_interpolate(const RunConfig& c, Output& o) {
  std::vector<InterpolationProblem> problems;
  if (!c.file.empty()) {
    problems = load_corpus_file(c.file);
  } else {
    if (c.formula.empty() || c.right.empty()) throw CLI::ValidationError("interpolate needs --file or --formula and --right");
    InterpolationProblem p;
    p.name = "cli";
    p.logic = logic_from_name(c.logic);
    p.sig = signature_for(c, {c.formula, c.right});
    p.left = parse(c.formula, p.sig);
    p.right = parse(c.right, p.sig);
    p.x1 = c.x1.empty() ? generators(p.left) : as_set(c.x1);
    p.x2 = c.x2.empty() ? generators(p.right) : as_set(c.x2);
    problems.push_back(p);
  }
  o.doc["bounds"]["domain_bound"] = c.domain_bound;
  o.doc["results"] = json::array();
  std::size_t ok = 0;
  for (const auto& p : problems) {
    json r{{"name", p.name}, {"logic", p.logic.name}, {"A", print(p.left)}, {"B", print(p.right)}};
    try {
      InterpolationResult res = interpolate(p, c.domain_bound);
      InterpolantCheck chk = verify_interpolant(p, res.interpolant, c.domain_bound);
      r["interpolant"] = print(res.interpolant);
      r["method"] = res.method;
      r["left_implication"] = chk.left_ok;
      r["right_implication"] = chk.right_ok;
      r["vocabulary"] = chk.vocabulary_ok;
      r["index"] = chk.index_ok;
      r["reabstracted"] = res.reabstracted;
      const bool good = chk.all();
      ok += good;
      o.text << (good ? "OK   " : "FAIL ") << p.name << ": " << pretty(res.interpolant) << "  [left "
             << (chk.left_ok ? "ok" : "fail") << ", right " << (chk.right_ok ? "ok" : "fail") << ", vocabulary "
             << (chk.vocabulary_ok ? "ok" : "fail") << "]\n";
    } catch (const NotDerivable& e) {
      r["error"] = e.what();
      o.text << "NOT-DERIVABLE " << p.name << ": " << e.what() << "\n";
    }
    o.doc["results"].push_back(r);
  }
  o.doc["succeeded"] = ok;
  o.doc["total"] = problems.size();
  o.text << ok << "/" << problems.size() << " interpolated and verified\n";
  if (ok != problems.size()) o.code = Negative;
}

std::vector<SeedPair> seed_pairs(const RunConfig& c) {
  if (!c.file.empty()) return load_seed_pairs_file(c.file);
  if (c.formula.empty() || c.right.empty()) throw CLI::ValidationError("needs --file or --formula and --right");
  SeedPair s;
  s.name = "cli";
  s.logic = logic_from_name(c.logic);
  s.sig = signature_for(c, {c.formula, c.right});
  s.gamma = {parse(c.formula, s.sig)};
  s.delta = {parse(c.right, s.sig)};
  s.x1 = c.x1.empty() ? generators(s.gamma[0]) : as_set(c.x1);
  s.x2 = c.x2.empty() ? generators(s.delta[0]) : as_set(c.x2);
  return {s};
}

SaturationConfig saturation_config(const RunConfig& c, const SeedPair& s) {
  SaturationConfig cfg;
  cfg.logic = s.logic;
  cfg.sig = s.sig;
  cfg.domain_bound = c.domain_bound;
  cfg.depth = or_default(c.depth, cfg.depth);
  if (c.trials) cfg.steps = c.trials;
  if (c.max_worlds > 0) cfg.max_worlds = static_cast<std::size_t>(c.max_worlds);
  return cfg;
}

json bounds_json(const SaturationConfig& cfg) {
  return {{"domain_bound", cfg.domain_bound},
          {"depth", cfg.depth},
          {"steps", cfg.steps},
          {"enumeration_limit", cfg.enumeration_limit},
          {"max_worlds", cfg.max_worlds}};
}

void cmd_saturate(const RunConfig& c, Output& o) {
  o.doc["results"] = json::array();
  for (const auto& s : seed_pairs(c)) {
    const SaturationConfig cfg = saturation_config(c, s);
    o.doc["bounds"] = bounds_json(cfg);
    json r{{"name", s.name}, {"logic", s.logic.name}};
    try {
      IndexSupply supply;
      TheoryPair pair = saturate(s.gamma, s.delta, s.x1, s.x2, cfg, supply);
      SaturationReport rep = check_saturated(pair, trace_universe(pair), s.x1, s.x2, cfg);
      r["pair"] = json::parse(trace_to_json(pair));
      r["conditions"] = json::array();
      for (const auto& k : rep.conditions) {
        r["conditions"].push_back({{"condition", k.condition}, {"pass", k.pass}, {"checked", k.checked}, {"detail", k.detail}});
      }
      r["saturated"] = rep.all();
      o.text << (rep.all() ? "SATURATED " : "INCOMPLETE ") << s.name << ": |T|=" << pair.theory.size()
             << " |F|=" << pair.cotheory.size() << " steps=" << pair.log.size()
             << " dilation=" << pair.dilation_level << "\n";
      for (const auto& k : rep.conditions) {
        o.text << "  (" << k.condition << ") " << (k.pass ? "pass" : "fail") << " [" << k.checked << "]"
               << (k.detail.empty() ? "" : " " + k.detail) << "\n";
      }
      if (!rep.all()) o.code = Negative;
    } catch (const SeparableInput& e) {
      r["separable"] = e.what();
      o.text << "SEPARABLE " << s.name << ": " << e.what() << "\n";
      o.code = Negative;
    }
    o.doc["results"].push_back(r);
  }
}

void cmd_countermodel(const RunConfig& c, Output& o) {
  o.doc["results"] = json::array();
  for (const auto& s : seed_pairs(c)) {
    const SaturationConfig cfg = saturation_config(c, s);
    o.doc["bounds"] = bounds_json(cfg);
    json r{{"name", s.name}, {"logic", s.logic.name}};
    try {
      IndexSupply supply;
      Countermodel cm = build_countermodel(s.gamma, s.delta, s.x1, s.x2, cfg, supply);
      r["system"] = json::parse(to_json(cm.system));
      r["valuation"] = json::parse(to_json(cm.valuation, s.sig));
      r["world"] = cm.world;
      r["tuple"] = cm.tuple;
      r["pass"] = cm.pass;
      r["pruned"] = cm.pruned;
      r["findings"] = cm.findings;
      r["report"] = json::array();
      for (const auto& l : cm.report) {
        r["report"].push_back({{"term", print(l.term)}, {"expected", l.expected}, {"actual", l.actual}});
      }
      o.text << (cm.pass ? "COUNTERMODEL " : "FAILED ") << s.name << ": " << cm.system.worlds.size()
             << " world(s), tuple (";
      for (std::size_t i = 0; i < cm.tuple.size(); ++i) o.text << (i ? "," : "") << cm.tuple[i];
      o.text << ")\n";
      for (const auto& l : cm.report) {
        o.text << "  " << (l.expected ? 1 : 0) << " expected, " << (l.actual ? 1 : 0) << " actual: " << pretty(l.term)
               << "\n";
      }
      for (const auto& f : cm.findings) o.text << "  note: " << f << "\n";
      if (!cm.pass) o.code = Negative;
    } catch (const SeparableInput& e) {
      r["separable"] = e.what();
      o.text << "SEPARABLE " << s.name << ": " << e.what() << "\n";
      o.code = Negative;
    }
    o.doc["results"].push_back(r);
  }
}

void cmd_correspond(const RunConfig& c, Output& o) {
  std::vector<Schema> schemas = all_schemas();
  if (!c.schema.empty()) schemas = {schema_from_name(c.schema)};
  if (!c.file.empty()) {
    KripkeSystem k = system_from_json(read_file(c.file));
    FrameFlags f = frame_properties(k.access);
    o.doc["frame"] = {{"worlds", k.world_count()},
                      {"serial", f.serial},
                      {"reflexive", f.reflexive},
                      {"transitive", f.transitive}};
    o.doc["schemas"] = json::array();
    o.text << "serial " << f.serial << ", reflexive " << f.reflexive << ", transitive " << f.transitive << "\n";
    for (Schema s : schemas) {
      SchemaCheck chk = validates_schema(k.access, s);
      json r{{"schema", schema_name(s)}, {"valid", chk.valid}, {"condition", condition_holds(f, s)}};
      if (chk.valuation) r["witness"] = {{"valuation", *chk.valuation}, {"world", *chk.world}};
      o.doc["schemas"].push_back(r);
      o.text << schema_name(s) << ": " << (chk.valid ? "valid" : "not valid");
      if (chk.valuation) o.text << " (p = mask " << *chk.valuation << ", fails at w" << *chk.world << ")";
      o.text << "\n";
      if (chk.valid != condition_holds(f, s)) o.code = Negative;
    }
    return;
  }
  CorrespondenceReport r = correspondence_report(or_default(c.max_worlds, 3), c.iso, schemas);
  o.doc["report"] = json::parse(report_to_json(r));
  o.doc["bounds"]["max_worlds"] = r.max_worlds;
  o.text << format_report(r);
  if (r.discrepancies()) o.code = Negative;
}

SemigroupRule rule_from_text(const std::string& s) {
  SemigroupSpec spec = parse_semigroup_spec(s);
  if (spec.generators.size() != 1) throw CLI::ValidationError("expected one rule, got '" + s + "'");
  return spec.generators[0];
}

void cmd_richness(const RunConfig& c, Output& o) {
  if (!c.file.empty()) {
    RichnessReport r = rich_check(parse_semigroup_spec(read_file(c.file)));
    o.doc["bounds"] = {{"depth", r.depth}, {"window", r.window}};
    o.doc["fragment_size"] = r.fragment_size;
    o.doc["fragment_closed"] = r.fragment_closed;
    o.doc["note"] = r.note;
    o.doc["conditions"] = json::array();
    for (const auto& k : r.conditions) {
      o.doc["conditions"].push_back({{"condition", k.condition}, {"verdict", to_string(k.verdict)}, {"detail", k.detail}});
      o.text << "(" << k.condition << ") " << to_string(k.verdict) << (k.detail.empty() ? "" : "  " + k.detail) << "\n";
      if (k.verdict == Verdict::Fail) o.code = Negative;
    }
    o.text << "fragment: " << r.fragment_size << " elements" << (r.fragment_closed ? " (closed)" : "") << "\n";
    if (!r.note.empty()) o.text << r.note << "\n";
    return;
  }
  StrongRichnessReport r = strongly_rich_check(rule_from_text(c.sigma), rule_from_text(c.pi), c.n_max, c.window);
  o.doc["bounds"] = {{"n_max", c.n_max}, {"window", r.window}};
  o.doc["sigma"] = c.sigma;
  o.doc["pi"] = c.pi;
  o.doc["all_pass"] = r.all_pass;
  o.doc["rows"] = json::array();
  for (const auto& row : r.rows) {
    o.doc["rows"].push_back({{"n", row.n}, {"verdict", to_string(row.verdict)}, {"support", row.support}, {"detail", row.detail}});
    o.text << "n=" << row.n << " " << to_string(row.verdict) << (row.detail.empty() ? "" : "  " + row.detail) << "\n";
  }
  o.text << (r.all_pass ? "strongly rich on the window\n" : "not strongly rich on the window\n");
  if (!r.all_pass) o.code = Negative;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modal substitution algebra toolkit", "msa"};
  app.require_subcommand(1);
  RunConfig c;

  auto common = [&](CLI::App* s) {
    s->add_option("--logic", c.logic, "K, D, T, K4, D4 or S4")->check(CLI::IsMember({"K", "D", "T", "K4", "D4", "S4"}));
    s->add_option("--sig", c.sig_path, "signature file");
    s->add_option("--formula", c.formula, "term as an s-expression");
    s->add_option("--file", c.file, "input file");
    s->add_option("--max-worlds", c.max_worlds)->check(CLI::PositiveNumber);
    s->add_option("--max-domain", c.max_domain)->check(CLI::PositiveNumber);
    s->add_option("--width", c.width)->check(CLI::PositiveNumber);
    s->add_option("--depth", c.depth)->check(CLI::PositiveNumber);
    s->add_option("--trials", c.trials)->check(CLI::PositiveNumber);
    s->add_option("--domain-bound", c.domain_bound)->check(CLI::PositiveNumber);
    s->add_option("--seed", c.seed);
    s->add_option("--out", c.out_path, "write output here instead of stdout");
    s->add_flag("--structured", c.structured, "JSON output");
  };
  auto pair_options = [&](CLI::App* s) {
    s->add_option("--right", c.right, "right-hand term (B / Delta)");
    s->add_option("--x1", c.x1, "generators of the left vocabulary")->delimiter(',');
    s->add_option("--x2", c.x2, "generators of the right vocabulary")->delimiter(',');
  };

  std::map<std::string, void (*)(const RunConfig&, Output&)> handlers{
      {"normalize", cmd_normalize},       {"check-identity", cmd_check_identity},
      {"check-axioms", cmd_check_axioms}, {"prove", cmd_prove},
      {"interpolate", cmd_interpolate},   {"saturate", cmd_saturate},
      {"countermodel", cmd_countermodel}, {"correspond", cmd_correspond},
      {"richness", cmd_richness}};

  std::map<std::string, CLI::App*> subs;
  subs["normalize"] = app.add_subcommand("normalize", "normal form of each term");
  subs["check-identity"] = app.add_subcommand("check-identity", "randomized check of catalogued identities");
  subs["check-axioms"] = app.add_subcommand("check-axioms", "axioms in F_K over random systems");
  subs["prove"] = app.add_subcommand("prove", "decide |- formula in a logic");
  subs["interpolate"] = app.add_subcommand("interpolate", "interpolants for A -> B or a corpus file");
  subs["saturate"] = app.add_subcommand("saturate", "saturate inseparable pairs");
  subs["countermodel"] = app.add_subcommand("countermodel", "countermodels from saturated pairs");
  subs["correspond"] = app.add_subcommand("correspond", "frame correspondence table");
  subs["richness"] = app.add_subcommand("richness", "richness of transformation semigroups");
  for (auto& [n, s] : subs) common(s);
  subs["check-identity"]->add_option("--name", c.name, "identity name (default: whole catalogue)");
  subs["check-axioms"]->add_option("--systems", c.systems, "random systems")->check(CLI::PositiveNumber);
  subs["prove"]->add_option("--countermodel", c.countermodel_path, "write countermodels here");
  subs["prove"]->add_option("--budget", c.budget, "proof search step budget")->check(CLI::PositiveNumber);
  pair_options(subs["interpolate"]);
  pair_options(subs["saturate"]);
  pair_options(subs["countermodel"]);
  subs["correspond"]->add_option("--schema", c.schema, "dia-top, 4 or t");
  subs["correspond"]->add_flag("--iso", c.iso, "one frame per isomorphism class");
  subs["richness"]->add_option("--sigma", c.sigma);
  subs["richness"]->add_option("--pi", c.pi);
  subs["richness"]->add_option("--n-max", c.n_max)->check(CLI::PositiveNumber);
  subs["richness"]->add_option("--window", c.window)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "msa: " << e.what() << "\n";
    return Usage;
  }
  for (auto& [n, s] : subs) {
    if (s->parsed()) c.command = n;
  }

  Output o;
  try {
    handlers.at(c.command)(c, o);
  } catch (const BudgetExceeded& e) {
    err << "msa: " << e.what() << "\n";
    return Budget;
  } catch (const CLI::Error& e) {
    err << "msa: " << e.what() << "\n";
    return Usage;
  } catch (const Error& e) {
    err << "msa: " << e.what() << "\n";
    return Usage;
  }

  std::string text;
  if (c.structured) {
    o.doc["command"] = c.command;
    o.doc["seed"] = c.seed;
    o.doc["exit_code"] = o.code;
    text = o.doc.dump(2) + "\n";
  } else {
    text = o.text.str();
  }
  if (c.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out_path);
    if (!f) {
      err << "msa: cannot write " << c.out_path << "\n";
      return Usage;
    }
    f << text;
  }
  return o.code;
}

Captured run_captured(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"msa"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Captured c;
  c.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

}  // namespace msa::cli
