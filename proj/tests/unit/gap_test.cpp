#include <gtest/gtest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "ossl/errors.hpp"
#include "ossl/gap.hpp"

namespace ossl {
namespace {

TEST(Mmd2, IdenticalSetsAreZero) {
  std::mt19937_64 rng(1);
  const PointSet x = testing::random_points(rng, 30, 4);
  EXPECT_LT(std::abs(mmd2(x, x, KernelSpec::median_heuristic())), 1e-12);
  EXPECT_LT(std::abs(mmd2(x, x, KernelSpec::fixed(0.3))), 1e-12);
}

TEST(Mmd2, ClosedFormPair) {
  const PointSet x{{0.0}}, y{{1.0}};
  EXPECT_NEAR(mmd2(x, y, KernelSpec::fixed(1.0)), 2.0 - 2.0 * std::exp(-0.5), 1e-12);
  EXPECT_NEAR(mmd2(x, y, KernelSpec::fixed(1.0)), 0.78694, 1e-5);
}

TEST(Mmd2, MatchesDoubleSumOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const PointSet x = testing::random_points(rng, 40, 3);
    const PointSet y = testing::random_points(rng, 40, 3, 0.5);
    const double sigma = median_bandwidth(x, y);
    EXPECT_NEAR(mmd2(x, y, KernelSpec::median_heuristic()), testing::naive_mmd2(x, y, sigma), 1e-10);
    EXPECT_NEAR(mmd2_with_bandwidth(x, y, 0.7), testing::naive_mmd2(x, y, 0.7), 1e-10);
  }
}

TEST(Mmd2, SymmetricAndNonNegative) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const PointSet x = testing::random_points(rng, 1 + trial % 17, 2);
    const PointSet y = testing::random_points(rng, 1 + trial % 11, 2, 1.0);
    const double a = mmd2(x, y, KernelSpec::fixed(1.2));
    EXPECT_NEAR(a, mmd2(y, x, KernelSpec::fixed(1.2)), 1e-12);
    EXPECT_GE(a, -1e-12);
  }
}

TEST(Mmd2, Errors) {
  const PointSet x{{0.0, 1.0}}, y{{1.0}}, empty;
  EXPECT_THROW((void)mmd2(empty, x, KernelSpec::fixed(1.0)), ParameterError);
  EXPECT_THROW((void)mmd2(x, y, KernelSpec::fixed(1.0)), InputShapeError);
  EXPECT_THROW((void)mmd2(x, x, KernelSpec::fixed(0.0)), ParameterError);
  EXPECT_THROW((void)mmd2(x, x, KernelSpec::fixed(-2.0)), ParameterError);
}

TEST(MedianBandwidth, SmallSetAndDegenerate) {
  // Pairwise distances over {0, 1, 3}: 1, 2, 3 -> median 2.
  EXPECT_DOUBLE_EQ(median_bandwidth({{0.0}, {1.0}}, {{3.0}}), 2.0);
  EXPECT_DOUBLE_EQ(median_bandwidth({{0.5}, {0.5}}, {{0.5}}), 1.0);
}

TEST(MedianBandwidth, LargeSetsUseSubsampleAndStayFinite) {
  std::mt19937_64 rng(4);
  const PointSet x = testing::random_points(rng, 3000, 2);
  const PointSet y = testing::random_points(rng, 3000, 2);
  const double s = median_bandwidth(x, y);
  EXPECT_GT(s, 0.5);
  EXPECT_LT(s, 3.0);
}

TEST(PseudoPartition, ArgmaxAndTies) {
  const PointSet p{{0.9, 0.1}, {0.5, 0.5}, {0.2, 0.8}, {0.3, 0.3, 0.4}};
  const auto parts = pseudo_partition(p, 2);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], (std::vector<std::size_t>{0, 1, 3}));
  EXPECT_EQ(parts[1], (std::vector<std::size_t>{2}));
}

TEST(PseudoPartition, ExhaustiveAndDisjoint) {
  std::mt19937_64 rng(5);
  const PointSet p = testing::random_probabilities(rng, 100, 4);
  const auto parts = pseudo_partition(p, 3);
  std::vector<int> seen(100, 0);
  for (const auto& part : parts)
    for (auto i : part) ++seen[i];
  for (int s : seen) EXPECT_EQ(s, 1);
  EXPECT_THROW((void)pseudo_partition({{0.5}}, 2), InputShapeError);
}

TEST(MmdGap, IdenticalSetsGiveZero) {
  std::mt19937_64 rng(6);
  const PointSet p = testing::random_probabilities(rng, 60, 3);
  std::vector<int> labels;
  for (const auto& v : p) labels.push_back(static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin()));
  const GapReport r = mmd_gap(p, labels, p, 3, KernelSpec::median_heuristic());
  EXPECT_LT(std::abs(r.mmd_gap), 1e-9);
  EXPECT_TRUE(r.skipped_classes.empty());
}

TEST(MmdGap, HandBuiltMatchesOracle) {
  const PointSet pl{{0.9, 0.1}, {0.8, 0.2}, {0.3, 0.7}, {0.1, 0.9}};
  const std::vector<int> labels{0, 0, 1, 1};
  const PointSet pu{{0.6, 0.4}, {0.95, 0.05}, {0.45, 0.55}, {0.2, 0.8}};
  for (double sigma : {0.25, 1.0}) {
    const GapReport r = mmd_gap(pl, labels, pu, 2, KernelSpec::fixed(sigma));
    EXPECT_NEAR(r.mmd_gap, testing::naive_gap(pl, labels, pu, 2, sigma), 1e-10);
    EXPECT_NEAR(r.mmd_gap, r.recomputed_gap(), 1e-12);
    EXPECT_EQ(r.bandwidth_used, sigma);
    EXPECT_EQ(r.bandwidth_mode, "fixed");
    ASSERT_EQ(r.classwise_mmd2.size(), 2u);
  }
}

TEST(MmdGap, MedianModeUsesMarginalBandwidth) {
  std::mt19937_64 rng(7);
  const PointSet pl = testing::random_probabilities(rng, 20, 2);
  const PointSet pu = testing::random_probabilities(rng, 30, 2);
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) labels[static_cast<std::size_t>(i)] = i % 2;
  const GapReport r = mmd_gap(pl, labels, pu, 2, KernelSpec::median_heuristic());
  EXPECT_DOUBLE_EQ(r.bandwidth_used, median_bandwidth(pl, pu));
  EXPECT_EQ(r.bandwidth_mode, "median_heuristic");
  EXPECT_NEAR(r.mmd_gap, testing::naive_gap(pl, labels, pu, 2, r.bandwidth_used), 1e-10);
}

TEST(MmdGap, EmptyPseudoClassIsSkipped) {
  const PointSet pl{{0.9, 0.1}, {0.2, 0.8}};
  const std::vector<int> labels{0, 1};
  const PointSet pu{{0.7, 0.3}, {0.99, 0.01}};
  const GapReport r = mmd_gap(pl, labels, pu, 2, KernelSpec::fixed(1.0));
  EXPECT_EQ(r.skipped_classes, std::vector<int>{1});
  EXPECT_EQ(r.classwise_mmd2[1], 0.0);
  EXPECT_NEAR(r.mmd_gap, r.recomputed_gap(), 1e-12);
}

TEST(MmdGap, Errors) {
  const PointSet p{{0.5, 0.5}};
  EXPECT_THROW((void)mmd_gap({}, {}, p, 2, KernelSpec::fixed(1.0)), ParameterError);
  const std::vector<int> one{0};
  EXPECT_THROW((void)mmd_gap(p, one, {}, 2, KernelSpec::fixed(1.0)), ParameterError);
  const std::vector<int> bad{2};
  EXPECT_THROW((void)mmd_gap(p, bad, p, 2, KernelSpec::fixed(1.0)), ParameterError);
}

}  // namespace
}  // namespace ossl
