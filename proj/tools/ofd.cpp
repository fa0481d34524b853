// Command line front end for the online fair division library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ofd/ofd.hpp"

namespace {

using namespace ofd;

struct Globals {
  std::string engine = "exact-compressed";
  std::uint64_t seed = 1;
  long samples = 10000;
  std::string out;
  std::string format = "csv";

  EngineConfig config() const {
    EngineConfig cfg;
    cfg.engine = parse_engine(engine);
    cfg.seed = seed;
    cfg.samples = samples;
    return cfg;
  }
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_rows(const Globals& g, const std::vector<ReportRow>& rows) {
  Sink sink(g.out);
  if (g.format == "json")
    sink.stream() << rows_to_json(rows).dump(2) << "\n";
  else
    write_rows_csv(sink.stream(), rows);
}

void emit_checks(const Globals& g, const std::vector<Check>& checks) {
  Sink sink(g.out);
  if (g.format == "json")
    sink.stream() << checks_to_json(checks).dump(2) << "\n";
  else
    write_checks_csv(sink.stream(), checks);
}

void emit_table(const Globals& g, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  Sink sink(g.out);
  if (g.format == "json") {
    auto arr = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = row[i];
      arr.push_back(std::move(obj));
    }
    sink.stream() << arr.dump(2) << "\n";
  } else {
    write_csv(sink.stream(), header, rows);
  }
}

struct InstanceArgs {
  std::string path;
  std::string family;
  int n = 0;
  int m = 0;
  long param = 0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--instance", path, "Instance JSON file");
    cmd->add_option("--family", family, "Generator family");
    cmd->add_option("--n", n, "Number of agents");
    cmd->add_option("--m", m, "Number of items (random families)");
    cmd->add_option("--param", param, "Family parameter (example-3 utility)");
  }

  Instance load(std::uint64_t seed) const {
    if (!path.empty()) return read_instance(path);
    if (family.empty()) throw std::invalid_argument("need --instance or --family");
    return make_family(family, n, m, seed, param);
  }
};

std::vector<Objective> objectives_from(const std::string& text) {
  if (text == "all") return {Objective::ES, Objective::UW, Objective::EW};
  return {parse_objective(text)};
}

std::optional<Rational> try_optimum(const Instance& inst, Objective o) {
  try {
    return offline_optimum(inst, o);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

ReportRow sampled_row(const std::string& mechanism, Objective o, const std::string& regime, const std::string& family,
                      int n, int m, double value, double se, const std::optional<Rational>& optimum,
                      const EngineConfig& cfg) {
  ReportRow r;
  r.mechanism = mechanism;
  r.objective = to_string(o);
  r.regime = regime;
  r.family = family;
  r.n = n;
  r.m = m;
  r.engine = to_string(Engine::MonteCarlo);
  r.value = value;
  r.stderr_value = se;
  r.seed = cfg.seed;
  r.samples = cfg.samples;
  if (optimum) {
    r.optimum = to_fraction_string(*optimum);
    r.ratio = value > 0 ? format_double(to_double(*optimum) / value) : "inf";
    r.convention = "optimum/achieved";
  }
  return r;
}

int run_gen(const Globals& g, const InstanceArgs& args, const std::string& output) {
  const Instance inst = args.load(g.seed);
  const std::string path = output.empty() ? g.out : output;
  if (path.empty())
    std::cout << instance_to_json(inst).dump(2) << "\n";
  else
    write_instance(inst, path);
  return 0;
}

struct EvaluateArgs {
  InstanceArgs instance;
  std::string mechanism = "like";
  std::string objective = "all";
  std::string tape_hex;
  bool tape_mask = false;
  bool tape_repeats = false;
  int k = -1;
  std::string oracle;
  bool show_tape = false;
};

int run_evaluate(const Globals& g, const EvaluateArgs& a) {
  const EngineConfig cfg = g.config();
  const MechanismSpec spec = parse_mechanism(a.mechanism);
  const auto objectives = objectives_from(a.objective);

  if (a.instance.family == "like-adversary-adaptive") {
    if (spec.advised) throw std::invalid_argument("the adaptive adversary takes no advice");
    const int n = a.instance.n;
    const std::string family = a.instance.family;
    if (cfg.engine != Engine::MonteCarlo) {
      const Rational es = adaptive_adversary_es_exact(spec.kind, n);
      ReportRow r;
      r.mechanism = spec.name();
      r.objective = "ES";
      r.regime = "binary";
      r.family = family;
      r.n = n;
      r.m = n;
      r.engine = to_string(cfg.engine);
      r.value = to_double(es);
      r.value_exact = es;
      r.optimum = to_fraction_string(Rational(n));
      r.ratio = ratio(Objective::ES, n, es).ratio_string();
      r.convention = "optimum/achieved";
      emit_rows(g, {r});
    } else {
      const auto mc = adaptive_adversary_monte_carlo(spec.kind, n, cfg);
      emit_rows(g, {sampled_row(spec.name(), Objective::ES, "binary", family, n, n, mc.es, mc.es_stderr, Rational(n),
                                cfg)});
    }
    return 0;
  }

  const Instance inst = a.instance.load(g.seed);
  const std::string family = a.instance.path.empty() ? a.instance.family : a.instance.path;
  std::optional<AdviceTape> tape;
  int l = 0;
  if (spec.advised) {
    if (!a.tape_hex.empty()) {
      tape = tape_from_hex(a.tape_hex, inst.agents(), inst.items(), {!a.tape_mask, !a.tape_repeats}, std::max(a.k, 0));
    } else if (a.k >= 0) {
      OraclePolicy policy;
      policy.objective = a.oracle.empty() ? (objectives.size() == 1 ? objectives.front() : Objective::ES)
                                          : parse_objective(a.oracle);
      policy.regime = inst.is_binary() ? UtilityRegime::Binary : UtilityRegime::General;
      policy.k = a.k;
      tape = oracle_tape(inst, policy);
    } else {
      throw std::invalid_argument("advised mechanisms need --tape or --k");
    }
    l = tape->advised_agents();
    if (a.show_tape) std::cerr << tape_to_json(*tape).dump() << "\n";
  }
  const AdviceTape* tp = tape ? &*tape : nullptr;
  const Evaluation e = evaluate(inst, BidProfile::sincere(inst), spec.kind, tp, cfg);
  std::vector<ReportRow> rows;
  for (auto o : objectives) {
    const auto optimum = try_optimum(inst, o);
    ReportRow r = e.exact ? exact_row(spec.name(), o, inst, family, objective_value(*e.exact, o), optimum, false,
                                      cfg.engine)
                          : sampled_row(spec.name(), o, regime_of(inst), family, inst.agents(), inst.items(),
                                        e.value(o), e.stderr_of(o), optimum, cfg);
    r.k = tape ? static_cast<int>(tape->k()) : 0;
    r.l = l;
    rows.push_back(std::move(r));
  }
  emit_rows(g, rows);
  return 0;
}

struct SweepArgs {
  InstanceArgs instance;
  std::string mechanism = "ranking";
  std::string objective = "ES";
  int k_from = 0;
  int k_to = -1;
  int k_step = 1;
};

int run_sweep(const Globals& g, const SweepArgs& a) {
  const MechanismSpec spec = parse_mechanism(a.mechanism);
  if (a.instance.family.empty()) throw std::invalid_argument("sweep needs --family");
  const Instance probe = make_family(a.instance.family, a.instance.n, a.instance.m, g.seed, a.instance.param);
  const int k_to = a.k_to < 0 ? probe.items() : a.k_to;
  if (a.k_step < 1) throw std::invalid_argument("--k-step must be positive");
  std::vector<int> ks;
  for (int k = a.k_from; k <= k_to; k += a.k_step) ks.push_back(k);
  emit_rows(g, sweep_advice(a.instance.family, a.instance.n, parse_objective(a.objective), spec.kind, ks, g.config(),
                            a.instance.m, a.instance.param));
  return 0;
}

struct AxiomArgs {
  InstanceArgs instance;
  std::string mechanism = "like";
  std::string axiom = "all";
  int max_n = 3;
  std::string bound = "0";
};

int run_axioms(const Globals& g, const AxiomArgs& a) {
  const MechanismSpec spec = parse_mechanism(a.mechanism);
  if (spec.advised) throw std::invalid_argument("axioms are checked for base mechanisms");
  const Rational r = parse_rational(a.bound);
  std::vector<Instance> instances;
  if (!a.instance.path.empty() || !a.instance.family.empty()) {
    instances.push_back(a.instance.load(g.seed));
  } else {
    for (int n = 1; n <= a.max_n; ++n)
      for_each_binary(n, n, [&](const Instance& inst) { instances.push_back(inst); });
  }
  const std::vector<std::string> all = {"strategyproof", "envy-ex-ante", "envy-ex-post", "pareto-ex-post"};
  std::vector<std::string> axioms;
  if (a.axiom == "all")
    axioms = all;
  else if (std::find(all.begin(), all.end(), a.axiom) != all.end())
    axioms = {a.axiom};
  else
    throw std::invalid_argument("unknown axiom: " + a.axiom);

  std::vector<std::vector<std::string>> table;
  for (const auto& axiom : axioms) {
    long satisfied = 0, violated = 0;
    std::string example, measure;
    Rational worst = 0;
    bool have_worst = false;
    for (const auto& inst : instances) {
      bool ok = true;
      std::string detail;
      if (axiom == "strategyproof") {
        const auto v = check_strategyproof(inst, spec.kind);
        ok = v.satisfied;
        if (!ok) {
          const auto& c = *v.counterexample;
          std::string report;
          for (std::size_t j = 0; j < c.report.size(); ++j) report += (j ? " " : "") + to_string(c.report[j]);
          detail = "agent " + std::to_string(c.agent) + " reports [" + report + "]: " + to_string(c.sincere_utility) +
                   " -> " + to_string(c.misreport_utility);
        }
      } else if (axiom == "envy-ex-ante" || axiom == "envy-ex-post") {
        const auto v = axiom == "envy-ex-ante" ? check_envy_ex_ante(inst, spec.kind)
                                               : check_envy_ex_post(inst, spec.kind, r, g.config());
        ok = v.satisfied;
        if (!have_worst || v.max_envy > worst) {
          worst = v.max_envy;
          have_worst = true;
        }
        if (!ok)
          detail = "agent " + std::to_string(v.envier) + " envies " + std::to_string(v.envied) + " by " +
                   to_string(v.max_envy);
      } else {
        const auto v = check_pareto_ex_post(inst, spec.kind, g.config());
        ok = v.satisfied;
        if (!ok) {
          detail = "support " + allocation_to_json(*v.dominated).dump() + " dominated by " +
                   allocation_to_json(*v.dominating).dump();
        }
      }
      if (ok) {
        ++satisfied;
      } else {
        if (violated++ == 0) example = inst.name() + ": " + detail;
      }
    }
    if (have_worst) measure = to_string(worst);
    const std::string verdict = violated ? "VIOLATED" : (axiom == "strategyproof" ? "NO-COUNTEREXAMPLE" : "SATISFIED");
    table.push_back({spec.name(), axiom, std::to_string(instances.size()), std::to_string(satisfied),
                     std::to_string(violated), verdict, measure, example});
  }
  emit_table(g, {"mechanism", "axiom", "instances", "satisfied", "violated", "verdict", "max_envy", "counterexample"},
             table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online fair division mechanisms, exact and sampled"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--engine", g.engine, "exact-full, exact-compressed or monte-carlo")
      ->check(CLI::IsMember({"exact-full", "exact-compressed", "monte-carlo"}));
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--samples", g.samples, "Monte Carlo trials");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  int status = 0;

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  InstanceArgs gen_args;
  gen_args.add_to(gen);
  std::string gen_output;
  gen->add_option("-o,--output", gen_output, "Instance file to write");
  gen->callback([&] { status = run_gen(g, gen_args, gen_output); });

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate one mechanism on one instance");
  EvaluateArgs ev;
  ev.instance.add_to(evaluate_cmd);
  evaluate_cmd->add_option("--mechanism", ev.mechanism, "like, balanced-like, maximum-like, ranking, random, advised:...");
  evaluate_cmd->add_option("--objective", ev.objective, "ES, UW, EW or all");
  evaluate_cmd->add_option("--tape", ev.tape_hex, "Advice tape in hex");
  evaluate_cmd->add_flag("--tape-mask", ev.tape_mask, "Tape starts with an m-bit round mask");
  evaluate_cmd->add_flag("--tape-repeats", ev.tape_repeats, "Tape agents may repeat (base-n code)");
  evaluate_cmd->add_option("--k", ev.k, "Advised items (oracle tape, or prefix length of --tape)");
  evaluate_cmd->add_option("--oracle", ev.oracle, "Objective whose oracle builds the tape");
  evaluate_cmd->add_flag("--show-tape", ev.show_tape, "Print the tape as JSON on stderr");
  evaluate_cmd->callback([&] { status = run_evaluate(g, ev); });

  auto* sweep = app.add_subcommand("sweep", "Sweep the number of advised items");
  SweepArgs sw;
  sw.instance.add_to(sweep);
  sweep->add_option("--mechanism", sw.mechanism, "Base mechanism (advice is implied)");
  sweep->add_option("--objective", sw.objective, "ES, UW or EW");
  sweep->add_option("--k-from", sw.k_from, "First k");
  sweep->add_option("--k-to", sw.k_to, "Last k (default m)");
  sweep->add_option("--k-step", sw.k_step, "Step");
  sweep->callback([&] { status = run_sweep(g, sw); });

  auto* figure = app.add_subcommand("figure1", "Reciprocal ratio curves over k");
  int figure_n = 10;
  bool no_measure = false;
  figure->add_option("--n", figure_n, "Agents and items");
  figure->add_flag("--no-measure", no_measure, "Closed forms only");
  figure->callback([&] { emit_rows(g, figure1_data(figure_n, g.config(), !no_measure)); });

  auto* table = app.add_subcommand("table1", "Check advised ratio guarantees on small families");
  int tn = 3, tm = 3, tl = 2, general_samples = 200;
  table->add_option("--n", tn, "Agents");
  table->add_option("--m", tm, "Items");
  table->add_option("--l", tl, "Largest number of advised agents");
  table->add_option("--general-samples", general_samples, "Random general-utility instances");
  table->callback([&] {
    Table1Options opt;
    opt.seed = g.seed;
    opt.general_samples = general_samples;
    const auto rep = table1_check(tn, tm, tl, opt);
    emit_table(g, table1_columns(), table1_rows(rep));
    if (!rep.ok()) status = 1;
  });

  auto* examples = app.add_subcommand("examples", "Regression against the pinned example values");
  bool example_rows = false;
  examples->add_flag("--rows", example_rows, "Print every evaluated value instead of the checks");
  examples->callback([&] {
    const auto rep = run_examples();
    if (example_rows)
      emit_rows(g, rep.rows);
    else
      emit_checks(g, rep.checks);
    if (!rep.ok()) status = 1;
  });

  auto* axioms = app.add_subcommand("axioms", "Check fairness axioms");
  AxiomArgs ax;
  ax.instance.add_to(axioms);
  axioms->add_option("--mechanism", ax.mechanism, "Base mechanism");
  axioms->add_option("--axiom", ax.axiom, "strategyproof, envy-ex-ante, envy-ex-post, pareto-ex-post or all");
  axioms->add_option("--max-n", ax.max_n, "Enumerate binary n = m instances up to this size");
  axioms->add_option("--bound", ax.bound, "Ex post envy bound r");
  axioms->callback([&] { status = run_axioms(g, ax); });

  auto* dominance = app.add_subcommand("dominance", "Pointwise comparisons on small binary instances");
  int dom_n = 3;
  dominance->add_option("--max-n", dom_n, "Largest n = m");
  dominance->callback([&] {
    const auto rep = dominance_scan(dom_n);
    emit_checks(g, rep.checks);
    if (!rep.ok()) status = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
