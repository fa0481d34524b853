#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ofd/advice.hpp"
#include "ofd/core.hpp"
#include "ofd/evaluation.hpp"
#include "ofd/instances.hpp"
#include "ofd/mechanisms.hpp"
#include "ofd/offline.hpp"

namespace ofd {

// ---------------------------------------------------------------------------
// Report rows and checks

/// One line of experiment output. `value_exact` is empty for sampled or
/// closed-form irrational values; `stderr_value` is zero for exact ones.
struct ReportRow {
  std::string mechanism;
  std::string objective;
  std::string regime;
  std::string family;
  int n = 0;
  int m = 0;
  int k = 0;
  int l = 0;
  std::string engine;
  double value = 0;
  std::optional<Rational> value_exact;
  std::string optimum;
  std::string ratio;
  std::string convention;
  std::uint64_t seed = 0;
  long samples = 0;
  double stderr_value = 0;
};

inline const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {"mechanism", "objective", "regime", "family", "n",     "m",
                                                "k",         "l",         "engine", "value",  "value_exact",
                                                "optimum",   "ratio",     "convention", "seed", "samples",
                                                "stderr"};
  return cols;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline std::vector<std::string> row_fields(const ReportRow& r) {
  return {r.mechanism,
          r.objective,
          r.regime,
          r.family,
          std::to_string(r.n),
          std::to_string(r.m),
          std::to_string(r.k),
          std::to_string(r.l),
          r.engine,
          format_double(r.value),
          r.value_exact ? to_fraction_string(*r.value_exact) : std::string(),
          r.optimum,
          r.ratio,
          r.convention,
          std::to_string(r.seed),
          std::to_string(r.samples),
          format_double(r.stderr_value)};
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
    os << '\n';
  }
}

inline void write_rows_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
  std::vector<std::vector<std::string>> table;
  for (const auto& r : rows) table.push_back(row_fields(r));
  write_csv(os, report_columns(), table);
}

inline nlohmann::json rows_to_json(const std::vector<ReportRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["mechanism"] = r.mechanism;
    j["objective"] = r.objective;
    j["regime"] = r.regime;
    j["family"] = r.family;
    j["n"] = r.n;
    j["m"] = r.m;
    j["k"] = r.k;
    j["l"] = r.l;
    j["engine"] = r.engine;
    j["value"] = r.value;
    j["value_exact"] = r.value_exact ? nlohmann::json(to_fraction_string(*r.value_exact)) : nlohmann::json();
    j["optimum"] = r.optimum;
    j["ratio"] = r.ratio;
    j["convention"] = r.convention;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["stderr"] = r.stderr_value;
    out.push_back(std::move(j));
  }
  return out;
}

enum class CheckStatus { Pass, Fail, Info };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Info: return "INFO";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

inline Check make_check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

inline bool all_passed(const std::vector<Check>& checks) {
  for (const auto& c : checks)
    if (c.status == CheckStatus::Fail) return false;
  return true;
}

inline void write_checks_csv(std::ostream& os, const std::vector<Check>& checks) {
  std::vector<std::vector<std::string>> table;
  for (const auto& c : checks) table.push_back({c.name, to_string(c.status), c.detail});
  write_csv(os, {"check", "status", "detail"}, table);
}

inline nlohmann::json checks_to_json(const std::vector<Check>& checks) {
  auto out = nlohmann::json::array();
  for (const auto& c : checks) out.push_back({{"check", c.name}, {"status", to_string(c.status)}, {"detail", c.detail}});
  return out;
}

// ---------------------------------------------------------------------------
// Row builders

inline const char* regime_of(const Instance& inst) { return inst.is_binary() ? "binary" : "general"; }

inline Rational offline_optimum(const Instance& inst, Objective o) {
  switch (o) {
    case Objective::ES: return offline_es(inst).size;
    case Objective::UW: return offline_uw(inst);
    case Objective::EW: return offline_ew(inst).value;
  }
  return 0;
}

/// Row for an exact value measured against an offline optimum, in the c >= 1
/// convention unless `reciprocal` is set.
inline ReportRow exact_row(const std::string& mechanism, Objective o, const Instance& inst, const std::string& family,
                           const Rational& value, const std::optional<Rational>& optimum, bool reciprocal,
                           Engine engine = Engine::ExactCompressed) {
  ReportRow r;
  r.mechanism = mechanism;
  r.objective = to_string(o);
  r.regime = regime_of(inst);
  r.family = family;
  r.n = inst.agents();
  r.m = inst.items();
  r.engine = to_string(engine);
  r.value = to_double(value);
  r.value_exact = value;
  if (optimum) {
    r.optimum = to_fraction_string(*optimum);
    const auto rr = ratio(o, *optimum, value);
    r.ratio = reciprocal ? to_fraction_string(rr.reciprocal()) : rr.ratio_string();
    r.convention = reciprocal ? "achieved/optimum" : "optimum/achieved";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Example regression

struct ExamplesReport {
  std::vector<Check> checks;
  std::vector<ReportRow> rows;
  bool ok() const { return all_passed(checks); }
};

inline constexpr long kExample3Utility = 100;

/// Evaluates every example fixture under the four mechanisms (exact) and
/// compares the pinned values.
inline ExamplesReport run_examples() {
  ExamplesReport rep;
  const auto sincere_eval = [](const Instance& inst, MechanismKind kind) {
    return evaluate_exact_compressed(inst, BidProfile::sincere(inst), kind).welfare;
  };
  const auto pin = [&](const std::string& name, const Rational& got, const Rational& want) {
    rep.checks.push_back(make_check(name, got == want, "got " + to_string(got) + ", expected " + to_string(want)));
  };

  const Instance fixtures[] = {example_fixture(2), example_fixture(3, kExample3Utility), example_fixture(4),
                               example_fixture(5)};
  for (int e = 0; e < 4; ++e) {
    const auto& inst = fixtures[e];
    const std::string family = "example-" + std::to_string(e + 2);
    for (auto kind : {MechanismKind::Like, MechanismKind::BalancedLike, MechanismKind::MaximumLike,
                      MechanismKind::Ranking}) {
      const auto w = sincere_eval(inst, kind);
      for (auto o : {Objective::ES, Objective::UW, Objective::EW})
        rep.rows.push_back(exact_row(to_string(kind), o, inst, family, objective_value(w, o), offline_optimum(inst, o),
                                     false));
    }
  }

  const auto& ex2 = fixtures[0];
  pin("example-2 maximum-like ES", sincere_eval(ex2, MechanismKind::MaximumLike).es, 2);
  pin("example-2 ranking ES", sincere_eval(ex2, MechanismKind::Ranking).es, Rational(3, 2));
  const auto& ex3 = fixtures[1];
  pin("example-3 offline UW", offline_uw(ex3), kExample3Utility + 1);
  pin("example-3 balanced-like UW", sincere_eval(ex3, MechanismKind::BalancedLike).uw, 2);
  pin("example-3 ranking UW", sincere_eval(ex3, MechanismKind::Ranking).uw, 2);
  const auto& ex4 = fixtures[2];
  pin("example-4 maximum-like EW", sincere_eval(ex4, MechanismKind::MaximumLike).ew, 0);
  pin("example-4 offline EW", offline_ew(ex4).value, 1);
  const auto& ex5 = fixtures[3];
  pin("example-5 maximum-like EW", sincere_eval(ex5, MechanismKind::MaximumLike).ew, 2);
  for (auto kind : {MechanismKind::Like, MechanismKind::BalancedLike, MechanismKind::Ranking})
    pin(std::string("example-5 ") + to_string(kind) + " EW", sincere_eval(ex5, kind).ew, Rational(3, 2));
  return rep;
}

// ---------------------------------------------------------------------------
// Advice sweeps

/// Sweeps k for an advised mechanism on a named family. Each k builds the
/// objective's oracle tape and reports achieved/optimum.
inline std::vector<ReportRow> sweep_advice(const std::string& family, int n, Objective objective, MechanismKind kind,
                                           const std::vector<int>& k_range, const EngineConfig& cfg, int m = 0,
                                           long param = 0) {
  const Instance inst = make_family(family, n, m, cfg.seed, param);
  const UtilityRegime regime = inst.is_binary() ? UtilityRegime::Binary : UtilityRegime::General;
  const Rational optimum = offline_optimum(inst, objective);
  std::vector<ReportRow> rows;
  for (int k : k_range) {
    OraclePolicy policy{objective, regime, k, 0};
    const AdviceTape tape = oracle_tape(inst, policy);
    const Evaluation e = evaluate(inst, BidProfile::sincere(inst), kind, &tape, cfg);
    ReportRow r;
    if (e.exact) {
      r = exact_row(MechanismSpec{kind, true}.name(), objective, inst, family, objective_value(*e.exact, objective),
                    optimum, true, cfg.engine);
    } else {
      r.mechanism = MechanismSpec{kind, true}.name();
      r.objective = to_string(objective);
      r.regime = to_string(regime);
      r.family = family;
      r.n = inst.agents();
      r.m = inst.items();
      r.engine = to_string(cfg.engine);
      r.value = e.value(objective);
      r.stderr_value = e.stderr_of(objective);
      r.optimum = to_fraction_string(optimum);
      r.ratio = format_double(r.value / to_double(optimum));
      r.convention = "achieved/optimum";
      r.seed = cfg.seed;
      r.samples = cfg.samples;
    }
    r.k = k;
    r.l = policy.l;
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Figure 1 curves

/// Closed-form reciprocal ratios with k advised items among n. The formulas
/// are arranged so that the k = 0 and k = n endpoints are exact in floating
/// point.
struct Figure1Curves {
  static double e() { return std::exp(1.0); }
  static double offline_maximum_like(int n, int k) { return static_cast<double>(k) / n; }
  static double offline_balanced_like(int n, int k) { return static_cast<double>(k + n) / (2.0 * n); }
  static double offline_ranking(int n, int k) { return 1.0 - (n - k) / (e() * n); }
  static double online_maximum_like(int n, int k) { return k / (n - (n - k) / e()); }
  static double online_balanced_like(int n, int k) { return (k + n) / (2.0 * n - 2.0 * (n - k) / e()); }
  static double online_ranking(int, int) { return 1.0; }
};

/// Both panels of the k-sweep plot, plus measured points for advised
/// Ranking on the upper-triangular family (Monte Carlo) and advised
/// Maximum Like on its adversarial family (exact).
inline std::vector<ReportRow> figure1_data(int n = 10, const EngineConfig& cfg = {}, bool measure = true) {
  if (n < 1) throw std::invalid_argument("figure needs n >= 1");
  std::vector<ReportRow> rows;
  const auto curve = [&](const char* mechanism, const char* convention, int k, double value,
                         std::optional<Rational> exact) {
    ReportRow r;
    r.mechanism = mechanism;
    r.objective = "ES";
    r.regime = "binary";
    r.family = "closed-form";
    r.n = n;
    r.m = n;
    r.k = k;
    r.l = k;
    r.engine = "closed-form";
    r.value = value;
    r.value_exact = exact;
    r.ratio = exact ? to_fraction_string(*exact) : format_double(value);
    r.convention = convention;
    rows.push_back(std::move(r));
  };
  using F = Figure1Curves;
  for (int k = 0; k <= n; ++k) {
    curve("advised:maximum-like", "reciprocal-offline", k, F::offline_maximum_like(n, k), make_rational(k, n));
    curve("advised:balanced-like", "reciprocal-offline", k, F::offline_balanced_like(n, k), make_rational(k + n, 2 * n));
    curve("advised:like", "reciprocal-offline-upper-bound", k, F::offline_balanced_like(n, k),
          make_rational(k + n, 2 * n));
    curve("advised:ranking", "reciprocal-offline", k, F::offline_ranking(n, k),
          k == n ? std::optional<Rational>(Rational(1)) : std::nullopt);
  }
  for (int k = 0; k <= n; ++k) {
    const auto one_at_n = k == n ? std::optional<Rational>(Rational(1)) : std::nullopt;
    curve("advised:maximum-like", "reciprocal-online", k, F::online_maximum_like(n, k),
          k == 0 ? std::optional<Rational>(Rational(0)) : one_at_n);
    curve("advised:balanced-like", "reciprocal-online", k, F::online_balanced_like(n, k), one_at_n);
    curve("advised:like", "reciprocal-online-upper-bound", k, F::online_balanced_like(n, k), one_at_n);
    curve("advised:ranking", "reciprocal-online", k, F::online_ranking(n, k), Rational(1));
  }
  if (!measure) return rows;

  std::vector<int> ks(n + 1);
  std::iota(ks.begin(), ks.end(), 0);
  EngineConfig mc = cfg;
  mc.engine = Engine::MonteCarlo;
  for (auto& r : sweep_advice("upper-triangular", n, Objective::ES, MechanismKind::Ranking, ks, mc)) {
    r.convention = "reciprocal-offline";
    rows.push_back(std::move(r));
  }
  EngineConfig exact = cfg;
  exact.engine = Engine::ExactCompressed;
  for (auto& r : sweep_advice("maximum-like-adversary", n, Objective::ES, MechanismKind::MaximumLike, ks, exact)) {
    r.convention = "reciprocal-offline";
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Table of advised ratios

/// How a table cell is verified. LowerBound: achieved/optimum never falls
/// below the cell's bound. UpperWitness: some case reaches the bound or
/// lower. ZeroWitness: some case falls below the 1/n floor (MaxLike at m = n
/// must reach exactly 0). Report: measured only.
enum class CellKind { LowerBound, UpperWitness, ZeroWitness, Report };

inline const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::LowerBound: return "lower-bound";
    case CellKind::UpperWitness: return "upper-witness";
    case CellKind::ZeroWitness: return "zero-witness";
    case CellKind::Report: return "report";
  }
  return "?";
}

struct Table1Cell {
  MechanismKind mechanism = MechanismKind::Like;
  Objective objective = Objective::UW;
  UtilityRegime regime = UtilityRegime::Binary;
  std::string column;
  std::string claim;
  CellKind kind = CellKind::Report;
  long cases = 0;
  std::optional<Rational> min_ratio;
  std::optional<Rational> min_slack;  // ratio minus bound, lower-bound cells
  std::string witness;
  CheckStatus status = CheckStatus::Info;
};

struct Table1Report {
  int n = 0;
  int m = 0;
  int l = 0;
  std::vector<Table1Cell> cells;
  bool ok() const {
    for (const auto& c : cells)
      if (c.status == CheckStatus::Fail) return false;
    return true;
  }
};

struct Table1Options {
  std::uint64_t seed = 1;
  int general_samples = 200;
  int binary_samples = 300;  // used when exhaustive enumeration is too large
  int exhaustive_cells = 12;
};

namespace detail {

struct CellRule {
  std::string claim;
  CellKind kind;
  std::function<Rational(int n, int m, int k, int l)> bound;
};

inline CellRule cell_rule(MechanismKind mech, Objective o, UtilityRegime regime, int n, int m) {
  using K = MechanismKind;
  const auto constant = [](Rational v) { return [v](int, int, int, int) { return v; }; };
  const auto one_over_n = [](int nn, int, int, int) { return make_rational(1, nn); };
  const auto one_over_n_minus_l = [](int nn, int, int, int ll) { return make_rational(1, nn - ll); };
  const auto k_over_m = [](int, int mm, int k, int) { return make_rational(k, mm); };
  if (o == Objective::UW && regime == UtilityRegime::Binary) {
    if (mech == K::Ranking) return {"<= n/m", CellKind::UpperWitness, [](int nn, int mm, int, int) -> Rational { return make_rational(nn, mm); }};
    return {"1", CellKind::LowerBound, constant(1)};
  }
  if (o == Objective::UW) {
    switch (mech) {
      case K::MaximumLike: return {"1", CellKind::LowerBound, constant(1)};
      case K::Like:
        return {"k/m + 1/n - k/(nm)", CellKind::LowerBound, [](int nn, int mm, int k, int) -> Rational {
                  return make_rational(k, mm) + make_rational(1, nn) - make_rational(k, nn * mm);
                }};
      default: return {"k/m", CellKind::LowerBound, k_over_m};
    }
  }
  if (regime == UtilityRegime::Binary) {
    if (mech == K::MaximumLike || mech == K::Like) return {"1/n", CellKind::LowerBound, one_over_n};
    return {"1/(n-l)", m == n ? CellKind::LowerBound : CellKind::Report, one_over_n_minus_l};
  }
  if (mech == K::Like) return {"1/n", CellKind::LowerBound, one_over_n};
  if (mech == K::MaximumLike) return {"0", CellKind::ZeroWitness, constant(0)};
  if (m == n) return {"1/(n-l)", CellKind::LowerBound, one_over_n_minus_l};
  return {"0", CellKind::ZeroWitness, constant(0)};
}

inline std::string describe(const Instance& inst, int k, int l) {
  std::ostringstream os;
  os << "k=" << k << " l=" << l << " U=[";
  for (int i = 0; i < inst.agents(); ++i) {
    os << (i ? ";" : "");
    for (int j = 0; j < inst.items(); ++j) os << (j ? " " : "") << to_string(inst.utility(i, j));
  }
  os << "]";
  return os.str();
}

inline bool has_perfect_allocation(const Instance& inst) {
  return matched_count(maximum_matching(positive_edges(inst.utilities()))) == inst.agents();
}

}  // namespace detail

/// Verifies the advised-ratio table on small enumerated families. Binary
/// instances are enumerated exhaustively when n*m is small enough and are
/// restricted to those with a perfect allocation (the binary oracles need
/// one). General instances are seeded random ones, plus the two-agent
/// example fixtures when n = m = 2. For each k in [0, m) the objective's
/// oracle tape is built; tapes naming more than `l` distinct agents are
/// skipped, and 1/(n-l) bounds use the tape's own agent count.
inline Table1Report table1_check(int n, int m, int l, const Table1Options& opt = {}) {
  if (n < 2 || m < n) throw std::invalid_argument("table check needs 2 <= n <= m");
  if (l < 1 || l >= n) throw std::invalid_argument("table check needs l in [1, n)");
  Table1Report rep;
  rep.n = n;
  rep.m = m;
  rep.l = l;

  std::map<std::tuple<int, int, int>, std::size_t> index;
  const auto cell_for = [&](MechanismKind mech, Objective o, UtilityRegime regime) -> Table1Cell& {
    const auto key = std::make_tuple(static_cast<int>(mech), static_cast<int>(o), static_cast<int>(regime));
    auto it = index.find(key);
    if (it != index.end()) return rep.cells[it->second];
    const auto rule = detail::cell_rule(mech, o, regime, n, m);
    Table1Cell c;
    c.mechanism = mech;
    c.objective = o;
    c.regime = regime;
    c.column = (o == Objective::EW && regime == UtilityRegime::General) ? (m == n ? "m=n" : "m>n") : "m>=n";
    c.claim = rule.claim;
    c.kind = rule.kind;
    index[key] = rep.cells.size();
    rep.cells.push_back(c);
    return rep.cells.back();
  };
  for (auto regime : {UtilityRegime::Binary, UtilityRegime::General})
    for (auto o : {Objective::UW, Objective::EW})
      for (auto mech : {MechanismKind::MaximumLike, MechanismKind::BalancedLike, MechanismKind::Like,
                        MechanismKind::Ranking})
        cell_for(mech, o, regime);

  const auto visit = [&](const Instance& inst, UtilityRegime regime) {
    for (auto o : {Objective::UW, Objective::EW}) {
      Rational optimum;
      try {
        optimum = offline_optimum(inst, o);
      } catch (const std::domain_error&) {
        continue;
      }
      if (sgn(optimum) == 0) continue;
      for (int k = 0; k < m; ++k) {
        OraclePolicy policy{o, regime, k, 0};
        AdviceTape tape;
        try {
          tape = oracle_tape(inst, policy);
        } catch (const std::domain_error&) {
          continue;
        }
        if (policy.l > l) continue;
        for (auto mech : {MechanismKind::MaximumLike, MechanismKind::BalancedLike, MechanismKind::Like,
                          MechanismKind::Ranking}) {
          auto& cell = cell_for(mech, o, regime);
          const auto rule = detail::cell_rule(mech, o, regime, n, m);
          const auto w = evaluate_exact_compressed(inst, BidProfile::sincere(inst), mech, &tape).welfare;
          const Rational r = objective_value(w, o) / optimum;
          const Rational slack = r - rule.bound(n, m, k, policy.l);
          ++cell.cases;
          const bool worse = cell.kind == CellKind::LowerBound ? (!cell.min_slack || slack < *cell.min_slack)
                                                               : (!cell.min_ratio || r < *cell.min_ratio);
          if (!cell.min_ratio || r < *cell.min_ratio) cell.min_ratio = r;
          if (cell.kind == CellKind::LowerBound && (!cell.min_slack || slack < *cell.min_slack)) cell.min_slack = slack;
          if (worse) cell.witness = inst.name() + " " + detail::describe(inst, k, policy.l);
        }
      }
    }
  };

  const auto binary_visit = [&](const Instance& inst) {
    if (detail::has_perfect_allocation(inst)) visit(inst, UtilityRegime::Binary);
  };
  if (n * m <= opt.exhaustive_cells) {
    for_each_binary(n, m, binary_visit, opt.exhaustive_cells);
  } else {
    for (int s = 0; s < opt.binary_samples; ++s)
      binary_visit(random_instance(n, m, UtilityRegime::Binary, opt.seed + static_cast<std::uint64_t>(s)));
  }
  if (n == 2 && m == 2)
    for (int id : {4, 2, 3, 5}) visit(example_fixture(id), UtilityRegime::General);
  for (int s = 0; s < opt.general_samples; ++s) {
    const Instance inst = random_instance(n, m, UtilityRegime::General, opt.seed + static_cast<std::uint64_t>(s));
    visit(inst, inst.is_binary() ? UtilityRegime::Binary : UtilityRegime::General);
  }

  for (auto& c : rep.cells) {
    if (c.cases == 0) {
      c.status = c.kind == CellKind::Report ? CheckStatus::Info : CheckStatus::Fail;
      continue;
    }
    switch (c.kind) {
      case CellKind::LowerBound: c.status = sgn(*c.min_slack) >= 0 ? CheckStatus::Pass : CheckStatus::Fail; break;
      case CellKind::UpperWitness:
        c.status = *c.min_ratio <= make_rational(n, m) ? CheckStatus::Pass : CheckStatus::Fail;
        break;
      case CellKind::ZeroWitness: {
        const bool exact_zero = c.mechanism == MechanismKind::MaximumLike && m == n;
        const bool ok = exact_zero ? sgn(*c.min_ratio) == 0 : *c.min_ratio < make_rational(1, n);
        c.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
        break;
      }
      case CellKind::Report: c.status = CheckStatus::Info; break;
    }
  }
  return rep;
}

inline std::vector<std::string> table1_columns() {
  return {"n", "m", "l", "mechanism", "objective", "regime", "column", "claim", "kind", "cases", "min_ratio",
          "min_slack", "status", "witness"};
}

inline std::vector<std::vector<std::string>> table1_rows(const Table1Report& rep) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : rep.cells)
    out.push_back({std::to_string(rep.n), std::to_string(rep.m), std::to_string(rep.l),
                   MechanismSpec{c.mechanism, true}.name(), to_string(c.objective), to_string(c.regime), c.column,
                   c.claim, to_string(c.kind), std::to_string(c.cases),
                   c.min_ratio ? to_fraction_string(*c.min_ratio) : "", c.min_slack ? to_fraction_string(*c.min_slack) : "",
                   to_string(c.status), c.witness});
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise dominance over small binary instances

struct DominanceReport {
  std::vector<Check> checks;
  long instances = 0;
  bool ok() const { return all_passed(checks); }
};

namespace detail {

inline std::string matrix_text(const Instance& inst) { return describe(inst, 0, 0).substr(8); }

// Calls visit(counts) for every assignment of the first `rounds` items to
// agents who value them.
inline void for_each_prefix(const Instance& inst, int rounds, std::vector<int>& counts, int round,
                            const std::function<void(const std::vector<int>&)>& visit) {
  if (round == rounds) {
    visit(counts);
    return;
  }
  const int item = inst.item_at(round);
  for (int a = 0; a < inst.agents(); ++a)
    if (sgn(inst.utility(a, item)) > 0) {
      ++counts[a];
      for_each_prefix(inst, rounds, counts, round + 1, visit);
      --counts[a];
    }
}

}  // namespace detail

/// Pointwise comparison of Ranking, Balanced Like, Like and Random on every
/// binary instance with n = m <= max_n.
inline DominanceReport dominance_scan(int max_n = 3) {
  DominanceReport rep;
  long bl_below_like = 0, bl_above_like = 0, bl_ne_random = 0, prefix_violations = 0, prefixes = 0;
  long full_uw_violations = 0, ranking_discards = 0;
  long rk_es[3] = {0, 0, 0}, rk_ew[3] = {0, 0, 0};  // ranking <, =, > balanced like
  std::string bl_strict_witness, bl_random_witness, prefix_witness, ranking_witness, rk_es_below, rk_ew_below;
  const auto tally = [](long* t, const Rational& a, const Rational& b) { ++t[a < b ? 0 : (a == b ? 1 : 2)]; };
  for (int n = 1; n <= max_n; ++n) {
    for_each_binary(n, n, [&](const Instance& inst) {
      ++rep.instances;
      const auto sincere = BidProfile::sincere(inst);
      const auto like = evaluate_exact_compressed(inst, sincere, MechanismKind::Like).welfare;
      const auto bl = evaluate_exact_compressed(inst, sincere, MechanismKind::BalancedLike).welfare;
      const auto rnd = evaluate_exact_compressed(inst, sincere, MechanismKind::Random).welfare;
      const auto rk = evaluate_exact_compressed(inst, sincere, MechanismKind::Ranking).welfare;
      const std::string text = detail::matrix_text(inst);
      if (bl.es < like.es) ++bl_below_like;
      if (bl.es > like.es && bl_above_like++ == 0) bl_strict_witness = text;
      if (bl.es != rnd.es && bl_ne_random++ == 0) bl_random_witness = text;
      if (like.uw != inst.items() || bl.uw != inst.items()) ++full_uw_violations;
      if (rk.uw < inst.items() && ranking_discards++ == 0) ranking_witness = text;
      tally(rk_es, rk.es, bl.es);
      tally(rk_ew, rk.ew, bl.ew);
      if (rk.es < bl.es && rk_es_below.empty()) rk_es_below = text;
      if (rk.ew < bl.ew && rk_ew_below.empty()) rk_ew_below = text;

      std::vector<int> counts(n, 0);
      for (int j = 0; j <= inst.items(); ++j)
        detail::for_each_prefix(inst, j, counts, 0, [&](const std::vector<int>& c) {
          ++prefixes;
          MechanismState start{c, j, {}};
          const auto a = evaluate_exact_compressed(inst, sincere, MechanismKind::BalancedLike, nullptr, {}, &start);
          const auto b = evaluate_exact_compressed(inst, sincere, MechanismKind::Like, nullptr, {}, &start);
          if (a.welfare.es < b.welfare.es && prefix_violations++ == 0)
            prefix_witness = text + " prefix rounds=" + std::to_string(j);
        });
    });
  }
  const auto n_of = [](long v) { return std::to_string(v); };
  rep.checks.push_back(make_check("balanced-like ES >= like ES", bl_below_like == 0,
                                  n_of(bl_below_like) + " violations over " + n_of(rep.instances) + " instances"));
  rep.checks.push_back(make_check("balanced-like ES > like ES somewhere", bl_above_like > 0,
                                  n_of(bl_above_like) + " strict; first " + bl_strict_witness));
  rep.checks.push_back(make_check("balanced-like ES == random ES", bl_ne_random == 0,
                                  n_of(bl_ne_random) + " mismatches" +
                                      (bl_random_witness.empty() ? "" : "; first " + bl_random_witness)));
  rep.checks.push_back(make_check("prefix completions: balanced-like ES >= like ES", prefix_violations == 0,
                                  n_of(prefix_violations) + " violations over " + n_of(prefixes) + " prefixes" +
                                      (prefix_witness.empty() ? "" : "; first " + prefix_witness)));
  rep.checks.push_back(make_check("like and balanced-like UW == m", full_uw_violations == 0,
                                  n_of(full_uw_violations) + " violations"));
  rep.checks.push_back(make_check("ranking UW < m somewhere", ranking_discards > 0,
                                  n_of(ranking_discards) + " instances; first " + ranking_witness));
  rep.checks.push_back({"ranking vs balanced-like ES", CheckStatus::Info,
                        "below " + n_of(rk_es[0]) + ", equal " + n_of(rk_es[1]) + ", above " + n_of(rk_es[2]) +
                            (rk_es_below.empty() ? "" : "; first below " + rk_es_below)});
  rep.checks.push_back({"ranking vs balanced-like EW", CheckStatus::Info,
                        "below " + n_of(rk_ew[0]) + ", equal " + n_of(rk_ew[1]) + ", above " + n_of(rk_ew[2]) +
                            (rk_ew_below.empty() ? "" : "; first below " + rk_ew_below)});
  const auto ex2 = example_fixture(2);
  const auto ml = evaluate_exact_compressed(ex2, BidProfile::sincere(ex2), MechanismKind::MaximumLike).welfare.es;
  const auto rk = evaluate_exact_compressed(ex2, BidProfile::sincere(ex2), MechanismKind::Ranking).welfare.es;
  rep.checks.push_back(make_check("example-2 maximum-like ES > ranking ES", ml > rk,
                                  to_string(ml) + " vs " + to_string(rk)));
  return rep;
}

}  // namespace ofd
