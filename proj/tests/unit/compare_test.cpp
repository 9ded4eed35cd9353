#include <gtest/gtest.h>

#include <algorithm>

#include "ossl/compare.hpp"
#include "ossl/errors.hpp"

namespace ossl {
namespace {

RunRecord record(Strategy s, std::vector<double> accs, Mode mode = Mode::kPolar2d) {
  RunRecord r;
  r.scenario = default_scenario(mode);
  r.scenario.strategy = s;
  r.scenario.name = std::string(to_string(s));
  for (std::size_t i = 0; i < accs.size(); ++i) {
    SeedRun run;
    run.seed = i;
    run.final_accuracy = accs[i];
    GapReport g;
    g.mmd_gap = 0.1 * static_cast<double>(i + 1);
    run.gap_final = g;
    r.runs.push_back(run);
  }
  return r;
}

TEST(Compare, SelfComparisonIsZero) {
  const RunRecord a = record(Strategy::kSupervised, {0.9, 0.92});
  const ComparisonTable t = compare_strategies({a, a});
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1].accuracy_change, 0.0);
  EXPECT_EQ(t.rows[0].accuracy_change, 0.0);
}

TEST(Compare, ChangeAgainstBaseline) {
  const ComparisonTable t =
      compare_strategies({record(Strategy::kSupervised, {0.88}), record(Strategy::kDact, {0.91})});
  EXPECT_NEAR(t.rows[1].accuracy_change, 0.03, 1e-12);
  EXPECT_TRUE(t.rows[0].single_seed);
  EXPECT_EQ(t.rows[0].std_accuracy, 0.0);
  const ComparisonTable flipped =
      compare_strategies({record(Strategy::kSupervised, {0.88}), record(Strategy::kDact, {0.91})}, 1);
  EXPECT_NEAR(flipped.rows[0].accuracy_change, -0.03, 1e-12);
}

TEST(Compare, MeansAndSampleStd) {
  const ComparisonTable t =
      compare_strategies({record(Strategy::kSupervised, {0.8, 0.9, 1.0}), record(Strategy::kPl, {0.5, 0.5})});
  EXPECT_NEAR(t.rows[0].mean_accuracy, 0.9, 1e-12);
  EXPECT_NEAR(t.rows[0].std_accuracy, 0.1, 1e-12);
  EXPECT_FALSE(t.rows[0].single_seed);
  ASSERT_TRUE(t.rows[0].mean_gap_final);
  EXPECT_NEAR(*t.rows[0].mean_gap_final, 0.2, 1e-12);
  EXPECT_FALSE(t.rows[0].mean_gap_reference);
  EXPECT_NE(t.to_text().find(" *"), std::string::npos);
  const std::string csv = t.to_csv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Compare, Errors) {
  const RunRecord a = record(Strategy::kSupervised, {0.9});
  EXPECT_THROW(compare_strategies({a}), ParameterError);
  EXPECT_THROW(compare_strategies({a, a}, 2), ParameterError);
  EXPECT_THROW(compare_strategies({a, record(Strategy::kBgdact, {0.9}, Mode::kToyImage)}), ParameterError);
}

}  // namespace
}  // namespace ossl
