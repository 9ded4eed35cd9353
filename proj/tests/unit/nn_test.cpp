#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "ossl/errors.hpp"
#include "ossl/nn.hpp"

namespace ossl {
namespace {

using testing::LossPath;

TEST(Forward, ZeroParametersGiveZeroLogits) {
  Mlp m(3, 5, 2);
  const std::vector<double> x{0.3, -2.0, 7.0};
  const Vector out = m.forward(x);
  EXPECT_EQ(out.size(), 2);
  EXPECT_EQ(out.norm(), 0.0);
}

TEST(Forward, IdentityNet) {
  Mlp m(1, 1, 1, Activation::kRelu);
  m.weights_1()(0, 0) = 1.0;
  m.weights_2()(0, 0) = 1.0;
  const std::vector<double> x{2.0};
  EXPECT_EQ(m.forward(x)(0), 2.0);
}

TEST(Forward, MatchesHandRolledMatmul) {
  Rng rng = make_rng(11, Stream::kInit);
  for (Activation act : {Activation::kRelu, Activation::kTanh}) {
    const Mlp m = Mlp::initialized(2, 16, 3, act, rng);
    const std::vector<double> x{0.7, -1.3};
    const Vector got = m.forward(x);
    for (int o = 0; o < 3; ++o) {
      double acc = m.bias_2()(o);
      for (int h = 0; h < 16; ++h) {
        double z = m.bias_1()(h);
        for (int i = 0; i < 2; ++i) z += m.weights_1()(h, i) * x[static_cast<std::size_t>(i)];
        const double a = act == Activation::kRelu ? std::max(0.0, z) : std::tanh(z);
        acc += m.weights_2()(o, h) * a;
      }
      EXPECT_NEAR(got(o), acc, 1e-12);
    }
  }
}

TEST(Forward, RejectsWrongInputLength) {
  Mlp m(3, 4, 1);
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW((void)m.forward(x), InputShapeError);
  EXPECT_THROW((void)m.forward_batch(Matrix::Zero(2, 4)), InputShapeError);
}

TEST(Forward, BatchAgreesWithSingleAndIsDeterministic) {
  Rng rng = make_rng(3, Stream::kInit);
  const Mlp m = Mlp::initialized(4, 7, 3, Activation::kTanh, rng);
  Matrix x = Matrix::Random(5, 4);
  const Matrix a = m.predict(x);
  const Matrix b = m.forward_batch(x).logits;
  EXPECT_EQ(a, b);
  for (int i = 0; i < 5; ++i) {
    Eigen::RowVectorXd r = x.row(i);
    const Vector single = m.forward(std::span<const double>(r.data(), 4));
    for (int o = 0; o < 3; ++o) EXPECT_NEAR(single(o), a(i, o), 1e-14);
  }
}

TEST(Initialization, WithinFanInBound) {
  Rng rng = make_rng(5, Stream::kInit);
  const Mlp m = Mlp::initialized(9, 20, 4, Activation::kRelu, rng);
  EXPECT_LE(m.weights_1().cwiseAbs().maxCoeff(), 1.0 / 3.0);
  EXPECT_LE(m.weights_2().cwiseAbs().maxCoeff(), 1.0 / std::sqrt(20.0));
  EXPECT_GT(m.weights_1().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Parameters, RoundTrip) {
  Rng rng = make_rng(8, Stream::kInit);
  const Mlp m = Mlp::initialized(3, 4, 2, Activation::kRelu, rng);
  EXPECT_EQ(m.parameter_count(), 3u * 4 + 4 + 4 * 2 + 2);
  Mlp copy(3, 4, 2);
  copy.set_parameters(m.parameters());
  EXPECT_EQ(copy, m);
  EXPECT_THROW(copy.set_parameters(std::vector<double>(5)), InputShapeError);
}

TEST(Softmax, Examples) {
  const std::vector<double> zero{0.0, 0.0};
  const Vector a = softmax_t(zero, 1.0);
  EXPECT_DOUBLE_EQ(a(0), 0.5);
  EXPECT_DOUBLE_EQ(a(1), 0.5);

  const std::vector<double> l3{std::log(3.0), 0.0};
  const Vector b = softmax_t(l3, 1.0);
  EXPECT_NEAR(b(0), 0.75, 1e-12);
  EXPECT_NEAR(b(1), 0.25, 1e-12);

  const std::vector<double> two{2.0, 0.0}, one{1.0, 0.0};
  EXPECT_NEAR((softmax_t(two, 2.0) - softmax_t(one, 1.0)).norm(), 0.0, 1e-15);
}

TEST(Softmax, ShiftInvariantAndNormalized) {
  const std::vector<double> l{1.0, -3.0, 0.25, 7.0};
  std::vector<double> shifted = l;
  for (double& v : shifted) v += 123.0;
  const Vector p = softmax_t(l, 0.8);
  EXPECT_NEAR(p.sum(), 1.0, 1e-9);
  EXPECT_NEAR((p - softmax_t(shifted, 0.8)).norm(), 0.0, 1e-12);
  for (int i = 0; i < p.size(); ++i) {
    EXPECT_GT(p(i), 0.0);
    EXPECT_LT(p(i), 1.0);
  }
}

TEST(Softmax, RejectsNonPositiveTemperature) {
  const std::vector<double> l{1.0, 2.0};
  EXPECT_THROW((void)softmax_t(l, 0.0), ParameterError);
  EXPECT_THROW((void)softmax_t(l, -1.0), ParameterError);
}

TEST(Hinge, Examples) {
  EXPECT_EQ(hinge_loss(2.0, Sign::kPositive), 0.0);
  EXPECT_EQ(hinge_loss(0.0, Sign::kPositive), 1.0);
  EXPECT_EQ(hinge_loss(-0.5, Sign::kPositive), 1.5);
  EXPECT_EQ(hinge_loss(-0.5, Sign::kNegative), 0.5);
}

TEST(CrossEntropy, Examples) {
  const std::vector<double> onehot{0.0, 1.0, 0.0};
  EXPECT_NEAR(cross_entropy(1, onehot), 0.0, 1e-12);
  const std::vector<double> uniform4(4, 0.25);
  for (int t = 0; t < 4; ++t) EXPECT_NEAR(cross_entropy(t, uniform4), std::log(4.0), 1e-12);
  const std::vector<double> p{0.75, 0.25};
  EXPECT_NEAR(cross_entropy(1, p), std::log(4.0), 1e-12);
}

TEST(CrossEntropy, ZeroProbabilityIsFloored) {
  const std::vector<double> p{1.0, 0.0};
  const double ce = cross_entropy(1, p);
  EXPECT_TRUE(std::isfinite(ce));
  EXPECT_NEAR(ce, -std::log(kProbFloor), 1e-9);
}

TEST(Kl, Examples) {
  const std::vector<double> p{0.3, 0.7};
  EXPECT_NEAR(kl_divergence(p, p), 0.0, 1e-15);
  const std::vector<double> one{1.0, 0.0}, half{0.5, 0.5};
  EXPECT_NEAR(kl_divergence(one, half), std::log(2.0), 1e-12);
  const std::vector<double> a{0.5, 0.5}, b{0.9, 0.1};
  EXPECT_GT(std::abs(kl_divergence(a, b) - kl_divergence(b, a)), 1e-3);
}

TEST(Kl, LengthMismatch) {
  const std::vector<double> a{0.5, 0.5}, b{0.2, 0.3, 0.5};
  EXPECT_THROW((void)kl_divergence(a, b), InputShapeError);
}

TEST(Kl, NonNegativeOnRandomPairs) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    const auto pq = testing::random_probabilities(rng, 2, 2 + i % 5);
    EXPECT_GE(kl_divergence(pq[0], pq[1]), 0.0);
    EXPECT_NEAR(kl_divergence(pq[0], pq[0]), 0.0, 1e-12);
  }
}

TEST(Mse, Examples) {
  const std::vector<double> a{1.0, 0.0}, b{0.0, 1.0};
  EXPECT_EQ(mse_consistency(a, a), 0.0);
  EXPECT_DOUBLE_EQ(mse_consistency(a, b), 1.0);
  const std::vector<double> c{0.2, -3.0}, d{1.5, 4.0};
  EXPECT_EQ(mse_consistency(c, d), mse_consistency(d, c));
  const std::vector<double> e{1.0};
  EXPECT_THROW((void)mse_consistency(a, e), InputShapeError);
}

TEST(Backward, RequiresRecordedPass) {
  Mlp m(2, 3, 1);
  EXPECT_THROW((void)backward(m, ForwardPass{}, Matrix::Zero(1, 1)), UsageError);
}

TEST(Backward, FlatHingeRegionGivesZeroGradient) {
  Mlp m(2, 3, 1);
  m.bias_2()(0) = 5.0;  // every score is 5: margin satisfied for +1 labels
  Matrix x = Matrix::Random(4, 2);
  const ForwardPass pass = m.forward_batch(x);
  const std::vector<Sign> y(4, Sign::kPositive);
  const LossGrad lg = hinge_batch(pass.logits, y, 4);
  EXPECT_EQ(lg.value, 0.0);
  const auto g = testing::flatten(backward(m, pass, lg.logit_grad));
  for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(Backward, ScalesLinearlyWithLoss) {
  Rng rng = make_rng(2, Stream::kInit);
  const Mlp m = Mlp::initialized(3, 6, 4, Activation::kTanh, rng);
  const ForwardPass pass = m.forward_batch(Matrix::Random(5, 3));
  const std::vector<int> y{0, 1, 2, 3, 0};
  const Matrix g = cross_entropy_batch(pass.logits, y, 0.8, 5).logit_grad;
  const auto base = testing::flatten(backward(m, pass, g));
  const auto scaled = testing::flatten(backward(m, pass, 3.5 * g));
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(scaled[i], 3.5 * base[i], 1e-12 * (1 + std::abs(base[i])));
}

class GradientCheck : public ::testing::TestWithParam<LossPath> {};

TEST_P(GradientCheck, MatchesCentralDifferences) {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    EXPECT_LT(testing::gradient_check_trial(GetParam(), 1000 + seed), 1e-4) << "seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(AllLosses, GradientCheck,
                         ::testing::Values(LossPath::kHinge, LossPath::kCrossEntropy, LossPath::kKl, LossPath::kMse),
                         [](const auto& info) { return std::string(testing::loss_path_name(info.param)); });

TEST(Sgd, PlainStepWithoutMomentum) {
  Rng rng = make_rng(4, Stream::kInit);
  Mlp m = Mlp::initialized(2, 3, 1, Activation::kRelu, rng);
  const Mlp before = m;
  Gradients g = Gradients::zeros_like(2, 3, 1);
  g.weights_1.setConstant(0.5);
  g.bias_2.setConstant(-2.0);
  SgdMomentum opt(m);
  opt.step(m, g, 0.1, 0.0, false);
  EXPECT_EQ(m.weights_1(), (before.weights_1().array() - 0.1 * 0.5).matrix());
  EXPECT_EQ(m.bias_2()(0), before.bias_2()(0) + 0.2);
  EXPECT_EQ(m.weights_2(), before.weights_2());
}

TEST(Sgd, MomentumVelocitySequence) {
  Mlp m(1, 1, 1);
  Gradients g = Gradients::zeros_like(1, 1, 1);
  g.bias_2(0) = 2.0;
  SgdMomentum opt(m);
  opt.step(m, g, 1.0, 0.9, false);
  EXPECT_DOUBLE_EQ(opt.velocity().bias_2(0), 2.0);
  opt.step(m, g, 1.0, 0.9, false);
  EXPECT_DOUBLE_EQ(opt.velocity().bias_2(0), 1.9 * 2.0);
  EXPECT_DOUBLE_EQ(m.bias_2()(0), -2.0 * (1.0 + 1.9));
}

TEST(Sgd, NesterovLookahead) {
  Mlp m(1, 1, 1);
  Gradients g = Gradients::zeros_like(1, 1, 1);
  g.bias_2(0) = 1.0;
  SgdMomentum opt(m);
  opt.step(m, g, 1.0, 0.9, true);
  // v1 = 1; p -= g + mu * v1
  EXPECT_DOUBLE_EQ(m.bias_2()(0), -1.9);
}

TEST(Sgd, ZeroLearningRateAndShapeMismatch) {
  Rng rng = make_rng(6, Stream::kInit);
  Mlp m = Mlp::initialized(2, 3, 1, Activation::kRelu, rng);
  const Mlp before = m;
  Gradients g = Gradients::zeros_like(2, 3, 1);
  g.weights_2.setConstant(4.0);
  SgdMomentum opt(m);
  opt.step(m, g, 0.0, 0.9, true);
  EXPECT_EQ(m, before);
  EXPECT_THROW(opt.step(m, Gradients::zeros_like(2, 4, 1), 0.1, 0.9, true), InputShapeError);
}

TEST(Schedule, CosineWarmup) {
  TrainConfig c;
  c.epochs = 100;
  c.warmup_epochs = 10;
  c.learning_rate = 0.3;
  EXPECT_EQ(cosine_warmup_lr(0, c), 0.0);
  EXPECT_DOUBLE_EQ(cosine_warmup_lr(5, c), 0.15);
  EXPECT_DOUBLE_EQ(cosine_warmup_lr(10, c), 0.3);
  EXPECT_LT(cosine_warmup_lr(99, c), 1e-3 * 0.3);
  for (int e = 11; e < 100; ++e) EXPECT_LE(cosine_warmup_lr(e, c), cosine_warmup_lr(e - 1, c));
  EXPECT_THROW((void)cosine_warmup_lr(-1, c), ParameterError);
  EXPECT_THROW((void)cosine_warmup_lr(100, c), ParameterError);
}

TEST(Schedule, NoWarmupStartsAtBase) {
  TrainConfig c;
  c.epochs = 10;
  c.warmup_epochs = 0;
  c.learning_rate = 0.05;
  EXPECT_DOUBLE_EQ(cosine_warmup_lr(0, c), 0.05);
  c.epochs = 1;
  EXPECT_DOUBLE_EQ(cosine_warmup_lr(0, c), 0.05);
}

TEST(ScoreProbability, StableLogistic) {
  EXPECT_DOUBLE_EQ(score_probability(0.0), 0.5);
  EXPECT_NEAR(score_probability(std::log(3.0)), 0.75, 1e-12);
  EXPECT_EQ(score_probability(-1000.0), 0.0);
  EXPECT_EQ(score_probability(1000.0), 1.0);
}

}  // namespace
}  // namespace ossl
