#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ofd/harness.hpp"

using namespace ofd;

namespace {

const ReportRow* find_row(const std::vector<ReportRow>& rows, const std::string& mech, const std::string& family,
                          const std::string& convention, int k) {
  for (const auto& r : rows)
    if (r.mechanism == mech && r.family == family && r.convention == convention && r.k == k) return &r;
  return nullptr;
}

}  // namespace

TEST(Examples, AllPinnedValuesHold) {
  const auto rep = run_examples();
  for (const auto& c : rep.checks) EXPECT_NE(c.status, CheckStatus::Fail) << c.name << ": " << c.detail;
  EXPECT_TRUE(rep.ok());
  EXPECT_FALSE(rep.rows.empty());
}

TEST(Figure1, ClosedFormEndpoints) {
  const auto rows = figure1_data(10, {}, false);
  const auto* r0 = find_row(rows, "advised:ranking", "closed-form", "reciprocal-offline", 0);
  ASSERT_NE(r0, nullptr);
  EXPECT_DOUBLE_EQ(r0->value, 1 - 1 / std::exp(1.0));
  for (const auto& r : rows)
    if (r.k == 10) EXPECT_EQ(r.value, 1.0) << r.mechanism << " " << r.convention;
  const auto* half = find_row(rows, "advised:maximum-like", "closed-form", "reciprocal-offline", 5);
  ASSERT_NE(half, nullptr);
  EXPECT_EQ(*half->value_exact, Rational(1, 2));
}

TEST(Figure1, MeasuredMaximumLikeMatchesCurve) {
  EngineConfig cfg;
  cfg.samples = 500;
  const auto rows = figure1_data(6, cfg, true);
  const auto* r = find_row(rows, "advised:maximum-like", "maximum-like-adversary", "reciprocal-offline", 3);
  ASSERT_NE(r, nullptr);
  EXPECT_EQ(r->ratio, "1/2");
  const auto* rk = find_row(rows, "advised:ranking", "upper-triangular", "reciprocal-offline", 6);
  ASSERT_NE(rk, nullptr);
  EXPECT_EQ(rk->value, 6.0);
}

TEST(Figure1, RejectsEmpty) { EXPECT_THROW(figure1_data(0, {}, false), std::invalid_argument); }

class Table1Test : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(Table1Test, NoFailingCell) {
  const auto [n, m, l] = GetParam();
  Table1Options opt;
  opt.general_samples = 60;
  opt.binary_samples = 80;
  const auto rep = table1_check(n, m, l, opt);
  EXPECT_FALSE(rep.cells.empty());
  for (const auto& c : rep.cells)
    EXPECT_NE(c.status, CheckStatus::Fail) << to_string(c.mechanism) << " " << c.column << " " << c.claim << " "
                                           << c.witness;
  EXPECT_TRUE(rep.ok());
}

INSTANTIATE_TEST_SUITE_P(Sizes, Table1Test,
                         ::testing::Values(std::make_tuple(2, 2, 1), std::make_tuple(2, 3, 1),
                                           std::make_tuple(3, 3, 2), std::make_tuple(2, 4, 1),
                                           std::make_tuple(3, 4, 2)));

TEST(Table1, RejectsBadShape) {
  EXPECT_THROW(table1_check(3, 2, 1), std::invalid_argument);
  EXPECT_THROW(table1_check(2, 2, 2), std::invalid_argument);
}

TEST(Table1, ZeroWitnessForMaximumLike) {
  const auto rep = table1_check(2, 2, 1);
  bool found = false;
  for (const auto& c : rep.cells)
    if (c.mechanism == MechanismKind::MaximumLike && c.objective == Objective::EW &&
        c.regime == UtilityRegime::General && c.kind == CellKind::ZeroWitness) {
      found = true;
      ASSERT_TRUE(c.min_ratio.has_value());
      EXPECT_EQ(*c.min_ratio, 0);
    }
  EXPECT_TRUE(found);
}

TEST(Dominance, ScanPasses) {
  const auto rep = dominance_scan(3);
  for (const auto& c : rep.checks) EXPECT_NE(c.status, CheckStatus::Fail) << c.name << ": " << c.detail;
  EXPECT_GT(rep.instances, 0);
}

TEST(Sweep, OneRowPerK) {
  const auto rows =
      sweep_advice("upper-triangular", 4, Objective::ES, MechanismKind::Like, {0, 1, 2, 3, 4}, EngineConfig{});
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].k, static_cast<int>(i));
    EXPECT_EQ(rows[i].convention, "achieved/optimum");
  }
  EXPECT_EQ(*rows[4].value_exact, 4);
}

TEST(Csv, ExactValuesSurvive) {
  ReportRow r;
  r.mechanism = "like";
  r.objective = "ES";
  r.value = 1.0 / 3;
  r.value_exact = Rational(1, 3);
  r.ratio = "3";
  r.family = "has,comma";
  std::ostringstream os;
  write_rows_csv(os, {r});
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')).find("value_exact") != std::string::npos, true);
  EXPECT_NE(text.find("1/3"), std::string::npos);
  EXPECT_NE(text.find("\"has,comma\""), std::string::npos);
  const auto j = rows_to_json({r});
  EXPECT_EQ(parse_rational(j[0]["value_exact"].get<std::string>()), Rational(1, 3));
}

TEST(Checks, StatusAggregation) {
  std::vector<Check> checks{make_check("a", true), make_check("b", true)};
  EXPECT_TRUE(all_passed(checks));
  checks.push_back(make_check("c", false, "why"));
  EXPECT_FALSE(all_passed(checks));
  std::ostringstream os;
  write_checks_csv(os, checks);
  EXPECT_NE(os.str().find("FAIL"), std::string::npos);
}
