#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ossl/augment.hpp"
#include "ossl/bank.hpp"
#include "ossl/errors.hpp"
#include "ossl/synth.hpp"

namespace ossl {
namespace {

TEST(Bank, FreshEntriesAreOodOneHot) {
  PredictionBank bank(5, 3, 0.8);
  for (std::size_t i = 0; i < 5; ++i) {
    const Vector& e = bank.entry(i);
    ASSERT_EQ(e.size(), 4);
    EXPECT_EQ(e(3), 1.0);
    EXPECT_EQ(e.head(3).norm(), 0.0);
  }
  const OodSplit s = split_ood(bank, 3);
  EXPECT_EQ(s.ood_indices.size(), 5u);
}

TEST(Bank, EmaExample) {
  PredictionBank bank(1, 2, 0.8);
  const std::vector<double> cur{0.5, 0.5, 0.0};
  const Vector& e = bank.update(0, cur);
  // 1 - 0.8 is not exactly 0.2 in binary, so compare to within a few ulps.
  EXPECT_DOUBLE_EQ(e(0), 0.1);
  EXPECT_DOUBLE_EQ(e(1), 0.1);
  EXPECT_DOUBLE_EQ(e(2), 0.8);
}

TEST(Bank, AlphaEndpoints) {
  const std::vector<double> cur{0.2, 0.3, 0.5};
  PredictionBank keep(1, 2, 1.0);
  keep.update(0, cur);
  EXPECT_EQ(keep.entry(0), (Vector(3) << 0.0, 0.0, 1.0).finished());
  PredictionBank replace(1, 2, 0.0);
  replace.update(0, cur);
  EXPECT_EQ(replace.entry(0), (Vector(3) << 0.2, 0.3, 0.5).finished());
}

TEST(Bank, StaysNormalized) {
  std::mt19937_64 rng(1);
  std::gamma_distribution<double> g(1.0, 1.0);
  PredictionBank bank(10, 4, 0.7);
  for (int step = 0; step < 2000; ++step) {
    std::vector<double> p(5);
    double s = 0.0;
    for (double& v : p) s += (v = g(rng));
    for (double& v : p) v /= s;
    bank.update(static_cast<std::size_t>(step % 10), p);
  }
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(bank.entry(i).sum(), 1.0, 1e-6);
}

TEST(Bank, Errors) {
  PredictionBank bank(2, 2, 0.5);
  EXPECT_THROW((void)bank.entry(2), UsageError);
  const std::vector<double> ok{0.2, 0.3, 0.5}, bad{0.5, 0.5};
  EXPECT_THROW(bank.update(7, ok), UsageError);
  EXPECT_THROW(bank.update(0, bad), InputShapeError);
  EXPECT_THROW(PredictionBank(2, 2, 1.5), ParameterError);
}

TEST(SplitOod, ArgmaxRuleAndTies) {
  PredictionBank bank(4, 2, 0.0);
  bank.update(0, std::vector<double>{0.5, 0.3, 0.2});
  bank.update(1, std::vector<double>{0.3, 0.3, 0.4});
  bank.update(2, std::vector<double>{0.4, 0.2, 0.4});
  bank.update(3, std::vector<double>{0.1, 0.8, 0.1});
  const OodSplit s = split_ood(bank, 2, 7);
  EXPECT_EQ(s.ood_indices, (std::set<std::size_t>{1, 2}));
  EXPECT_EQ(s.epoch_computed, 7);
  EXPECT_TRUE(s.contains(1));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(split_ood(bank, 2, 7).ood_indices, s.ood_indices);
  EXPECT_THROW(split_ood(bank, 3), ParameterError);
}

TEST(ImageAug, DeterministicShapePreservingAndStochastic) {
  const ToyImage img = gen_toy_id_images(2, 1, 4).front();
  EXPECT_EQ(image_aug(img, 99), image_aug(img, 99));
  std::set<std::vector<double>> distinct;
  Rng rng = make_rng(1, Stream::kAugment);
  for (int i = 0; i < 1000; ++i) {
    const ToyImage out = image_aug(img, rng);
    ASSERT_EQ(out.dims, img.dims);
    ASSERT_EQ(out.label, img.label);
    distinct.insert(out.pixels);
  }
  EXPECT_GE(distinct.size(), 2u);
}

TEST(ImageAug, ZeroMaskIsPresent) {
  ToyImage flat(ImageDims{}, 0.7);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ToyImage out = image_aug(flat, s);
    int zeros = 0;
    for (double p : out.pixels) zeros += p == 0.0;
    EXPECT_EQ(zeros, 3 * 4);  // one 2x2 block in each of 3 channels
  }
}

}  // namespace
}  // namespace ossl
