// One PASS/FAIL line per acceptance criterion.  Exit status is the number of
// failing criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "msa/cli.hpp"
#include "msa/correspond.hpp"
#include "msa/interp.hpp"
#include "msa/kripke.hpp"
#include "msa/prover.hpp"
#include "msa/rewrite.hpp"
#include "msa/saturate.hpp"
#include "msa/transform.hpp"

namespace msa {
namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void within(Outcome& o, Clock::time_point t0, double limit) {
  const double s = seconds_since(t0);
  o.detail << "time " << static_cast<int>(s + 0.5) << "s (limit " << limit << "s)";
  if (s > limit) o.fail("over time");
}

Outcome axiom_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1);
  std::size_t instances = 0, printed_failures = 0;
  for (std::size_t k = 0; k < 200; ++k) {
    KripkeSystem sys = random_system(rng, 3, 3);
    AxiomCheckOptions opts;
    opts.seed = k;
    AxiomReport r = check_axioms(sys, 3, opts);
    for (const auto& a : r.axioms) {
      if (a.name == "ax1-as-printed") {
        printed_failures += !a.pass;
      } else {
        instances += a.instances;
        if (!a.pass) o.fail(a.name + " " + a.counterexample);
      }
    }
  }
  // ax13 needs four distinct indices.
  std::size_t ax13 = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    AxiomCheckOptions opts;
    opts.seed = 1000 + k;
    opts.include_printed_ax1 = false;
    AxiomReport r = check_axioms(random_system(rng, 3, 2), 4, opts);
    const AxiomResult* a = r.find("ax13");
    ax13 += a->instances;
    if (!a->pass) o.fail("ax13 at width 4: " + a->counterexample);
  }
  if (ax13 == 0) o.fail("ax13 never instantiated");
  if (printed_failures == 0) o.fail("ax1-as-printed never refuted");
  o.detail << "200 systems, " << instances << " instances of ax1-ax14, " << ax13 << " of ax13 at width 4, ax1-as-printed refuted on "
           << printed_failures << " systems; ";
  within(o, t0, 120);
  return o;
}

Outcome identity_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t n = 0, checked = 0;
  for (const auto& name : identity_names()) {
    if (name == "ax1-as-printed") continue;
    IdentityReport r = check_identity(name, 200, Bounds{});
    ++n;
    checked += r.checked;
    if (!r.pass) o.fail(name + " " + r.counterexample);
    if (r.checked < 200) o.fail(name + " checked only " + std::to_string(r.checked));
  }
  o.detail << n << " identities, " << checked << " trials; ";
  within(o, t0, 300);
  return o;
}

Outcome normalization() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  Signature sig = parse_signature("p: 0\nq: 0 1\nr: 1\n");
  RandomTermOptions opts;
  opts.max_index = 2;
  for (int k = 0; k < 500; ++k) {
    opts.depth = 1 + static_cast<int>(uniform(rng, 5));
    Term t = random_term(rng, sig, opts);
    Term nt = normalize(t, sig);
    if (normalize(nt, sig) != nt) o.fail("not idempotent on " + print(t));
    if (!eq_at_bound(t, nt, sig, {}).equal) o.fail("unsound on " + print(t));
  }
  o.detail << "500 terms; ";
  within(o, t0, 300);
  return o;
}

Outcome prover_agreement() {
  Outcome o;
  const auto t0 = Clock::now();
  Signature sig = parse_signature("p:\nq:\n");
  std::size_t disagreements = 0, inconclusive = 0, total = 0;
  for (const Logic& logic : all_logics()) {
    std::mt19937_64 rng(std::hash<std::string>{}(logic.name) % 1000);
    RandomTermOptions opts;
    opts.quantifiers = false;
    for (int k = 0; k < 300; ++k) {
      opts.depth = 1 + static_cast<int>(uniform(rng, 5));
      Term t = random_term(rng, sig, opts);
      ++total;
      ProofResult r = prove(logic, Sequent{{}, {t}});
      std::optional<PropModel> oracle = propositional_countermodel(t, logic, 4);
      if (r.provable && oracle) ++disagreements;
      if (!r.provable) {
        if (!r.countermodel || eval_prop(t, *r.countermodel)[r.countermodel->root]) ++disagreements;
        else if (r.countermodel->size() <= 4 && !oracle) ++disagreements;
        else if (!oracle) ++inconclusive;
      }
    }
  }
  if (disagreements) o.fail(std::to_string(disagreements) + " disagreements");
  const Term p = gen("p");
  const std::vector<std::pair<Term, std::function<bool(const Logic&)>>> axioms{
      {dia(one()), [](const Logic& l) { return l.serial || l.reflexive; }},
      {imp(box(p), p), [](const Logic& l) { return l.reflexive; }},
      {imp(box(p), box(box(p))), [](const Logic& l) { return l.transitive; }}};
  for (const auto& [f, expected] : axioms) {
    for (const Logic& l : all_logics()) {
      if (prove(l, Sequent{{}, {f}}).provable != expected(l)) o.fail(pretty(f) + " in " + l.name);
    }
  }
  o.detail << total << " formulas over 6 logics, " << inconclusive << " refutations beyond |W|=4; ";
  within(o, t0, 600);
  return o;
}

Outcome interpolation(const std::string& dir) {
  Outcome o;
  const auto t0 = Clock::now();
  auto problems = load_corpus_file(dir + "/interp_corpus.json");
  std::map<std::string, int> per_logic;
  std::size_t ok = 0;
  for (const auto& p : problems) {
    ++per_logic[p.logic.name];
    try {
      InterpolationResult r = interpolate(p, 2);
      InterpolantCheck c = verify_interpolant(p, r.interpolant, 2);
      if (!c.left_ok || !c.right_ok || !c.vocabulary_ok) {
        o.fail(p.name + " verification");
        continue;
      }
      if (!is_quantified(p.left, p.sig) && !is_quantified(p.right, p.sig)) {
        if (propositional_countermodel(imp(p.left, r.interpolant), p.logic, 4) ||
            propositional_countermodel(imp(r.interpolant, p.right), p.logic, 4)) {
          o.fail(p.name + " refuted by frame oracle");
          continue;
        }
      }
      ++ok;
    } catch (const Error& e) {
      o.fail(p.name + ": " + e.what());
    }
  }
  for (const Logic& l : all_logics()) {
    if (per_logic[l.name] < 50) o.fail(l.name + " has " + std::to_string(per_logic[l.name]) + " problems");
  }
  o.detail << ok << "/" << problems.size() << " verified; ";
  within(o, t0, 600);
  return o;
}

std::set<std::string> common_of(const SeedPair& s) {
  std::set<std::string> c;
  for (const auto& g : s.x1) {
    if (s.x2.count(g)) c.insert(g);
  }
  return c;
}

SaturationConfig config_of(const SeedPair& s) {
  SaturationConfig cfg;
  cfg.logic = s.logic;
  cfg.sig = s.sig;
  return cfg;
}

Outcome saturation(const std::vector<SeedPair>& seeds) {
  Outcome o;
  const auto t0 = Clock::now();
  std::size_t steps = 0;
  if (seeds.size() < 20) o.fail("fewer than 20 seeds");
  for (const auto& s : seeds) {
    const SaturationConfig cfg = config_of(s);
    IndexSupply supply;
    TheoryPair pair = saturate(s.gamma, s.delta, s.x1, s.x2, cfg, supply);
    std::vector<Term> t = s.gamma, f = s.delta;
    IndexSet earlier;
    for (const Term& x : t) earlier.merge(mentioned_indices(x));
    for (const Term& x : f) earlier.merge(mentioned_indices(x));
    for (const TraceEntry& e : pair.log) {
      earlier.merge(mentioned_indices(e.term));
      if (e.action == "skip-separable") continue;
      std::vector<Term>& side = e.side == 'T' ? t : f;
      if (std::find(side.begin(), side.end(), e.term) == side.end()) side.push_back(e.term);
      if (e.witness) {
        if (earlier.count(*e.witness_index)) o.fail(s.name + " witness index not fresh");
        earlier.insert(*e.witness_index);
        side.push_back(*e.witness);
      }
      ++steps;
      if (separable(t, f, common_of(s), cfg)) o.fail(s.name + " separable at step " + std::to_string(e.step));
    }
    SaturationReport r = check_saturated(pair, trace_universe(pair), s.x1, s.x2, cfg);
    for (const auto& c : r.conditions) {
      if (!c.pass) o.fail(s.name + " condition " + std::to_string(c.condition) + ": " + c.detail);
    }
  }
  o.detail << seeds.size() << " seeds, " << steps << " replayed steps; ";
  within(o, t0, 600);
  return o;
}

Outcome countermodels(const std::vector<SeedPair>& seeds) {
  Outcome o;
  double slowest = 0;
  std::size_t worlds = 0;
  for (const auto& s : seeds) {
    const auto t0 = Clock::now();
    IndexSupply supply;
    Countermodel cm = build_countermodel(s.gamma, s.delta, s.x1, s.x2, config_of(s), supply);
    if (!cm.pass) o.fail(s.name + " report");
    if (!validate_system(cm.system).empty()) o.fail(s.name + " invalid system");
    worlds += cm.system.worlds.size();
    const SpacePtr& space = cm.valuation.begin()->second.space();
    const std::size_t x = space->encode(cm.tuple);
    for (const Term& g : s.gamma) {
      if (!eval(g, space, cm.valuation).at(cm.world, x)) o.fail(s.name + " gamma false");
    }
    for (const Term& d : s.delta) {
      if (eval(d, space, cm.valuation).at(cm.world, x)) o.fail(s.name + " delta true");
    }
    slowest = std::max(slowest, seconds_since(t0));
  }
  o.detail << seeds.size() << " seeds, " << worlds << " worlds in total, slowest seed " << slowest << "s (limit 300s)";
  if (slowest > 300) o.fail("over time");
  return o;
}

Outcome correspondence() {
  Outcome o;
  const auto t0 = Clock::now();
  CorrespondenceReport r = correspondence_report(3);
  if (r.rows.size() != 3) o.fail("missing rows");
  for (const auto& row : r.rows) {
    if (row.discrepancies()) o.fail(schema_name(row.schema));
    if (!row.both || !row.neither) o.fail(schema_name(row.schema) + " one direction untested");
  }
  o.detail << r.frames() << " frames, " << r.discrepancies() << " discrepancies; ";
  within(o, t0, 60);
  return o;
}

Outcome richness() {
  Outcome o;
  StrongRichnessReport s = strongly_rich_check({"suc"}, {"pred"}, 5, 16);
  if (!s.all_pass) o.fail("suc/pred not strongly rich");
  RichnessReport id = rich_check(parse_semigroup_spec("id\nwindow 8\ndepth 3\n"));
  bool two_fails = false;
  for (const auto& c : id.conditions) {
    if (c.condition == 2) two_fails = c.verdict == Verdict::Fail;
  }
  if (!two_fails) o.fail("{Id} passes condition (2)");
  o.detail << "suc/pred rows n=0.." << s.rows.size() - 1 << " pass; {Id} fails (2)";
  return o;
}

Outcome determinism(const std::string& dir) {
  Outcome o;
  const std::vector<std::vector<std::string>> runs{
      {"check-axioms", "--systems", "200", "--seed", "1", "--structured"},
      {"check-identity", "--trials", "50", "--seed", "1", "--structured"},
      {"prove", "--logic", "K", "--formula", "(dia T)", "--structured"},
      {"correspond", "--max-worlds", "3", "--structured"},
      {"richness", "--structured"},
      {"saturate", "--file", dir + "/saturation_seeds.json", "--structured"},
      {"countermodel", "--file", dir + "/saturation_seeds.json", "--structured"},
      {"normalize", "--formula", "(c 0 (or (g p) (not (not (g q)))))", "--structured"}};
  for (const auto& args : runs) {
    cli::Captured a = cli::run_captured(args), b = cli::run_captured(args);
    if (a.code != b.code || a.out != b.out) o.fail(args[0]);
    if (a.code == cli::Usage || a.code == cli::Budget) o.fail(args[0] + " exit " + std::to_string(a.code));
  }
  o.detail << runs.size() << " commands run twice, outputs byte-identical";
  return o;
}

}  // namespace
}  // namespace msa

int main(int argc, char** argv) {
  using namespace msa;
  const std::string dir = argc > 1 ? argv[1] : MSA_DATA_DIR;
  const auto seeds = load_seed_pairs_file(dir + "/saturation_seeds.json");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"axiom suite", axiom_suite},
      {"identity suite", identity_suite},
      {"normalization soundness", normalization},
      {"prover/oracle agreement", prover_agreement},
      {"interpolation corpus", [&] { return interpolation(dir); }},
      {"saturation invariant replay", [&] { return saturation(seeds); }},
      {"countermodel report", [&] { return countermodels(seeds); }},
      {"correspondence", correspondence},
      {"richness", richness},
      {"determinism", [&] { return determinism(dir); }}};
  int failures = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << name << ": " << o.detail.str() << std::endl;
  }
  return failures;
}
