// Independent reference computations shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ossl/gap.hpp"
#include "ossl/nn.hpp"

namespace ossl::testing {

/// Gradients in the same flat order as Mlp::parameters().
inline std::vector<double> flatten(const Gradients& g) {
  std::vector<double> out;
  out.insert(out.end(), g.weights_1.data(), g.weights_1.data() + g.weights_1.size());
  out.insert(out.end(), g.bias_1.data(), g.bias_1.data() + g.bias_1.size());
  out.insert(out.end(), g.weights_2.data(), g.weights_2.data() + g.weights_2.size());
  out.insert(out.end(), g.bias_2.data(), g.bias_2.data() + g.bias_2.size());
  return out;
}

/// Central differences of loss(model) w.r.t. every parameter.
inline std::vector<double> numeric_gradient(const Mlp& model, const std::function<double(const Mlp&)>& loss,
                                            double step = 1e-5) {
  std::vector<double> p = model.parameters();
  std::vector<double> grad(p.size());
  Mlp probe = model;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + step;
    probe.set_parameters(p);
    const double up = loss(probe);
    p[i] = orig - step;
    probe.set_parameters(p);
    const double down = loss(probe);
    p[i] = orig;
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

/// max_i |a_i - n_i| / max(|a_i|, |n_i|, floor).
inline double max_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

enum class LossPath { kHinge, kCrossEntropy, kKl, kMse };

inline const char* loss_path_name(LossPath p) {
  switch (p) {
    case LossPath::kHinge: return "hinge";
    case LossPath::kCrossEntropy: return "cross_entropy";
    case LossPath::kKl: return "kl";
    case LossPath::kMse: return "mse";
  }
  return "?";
}

/// One randomized (model, batch, loss) gradient check; returns the max
/// relative error between backprop and central differences.
inline double gradient_check_trial(LossPath path, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const int in = dim(rng);
  const int hidden = dim(rng) + 2;
  const int out = path == LossPath::kHinge ? 1 : dim(rng) % 4 + 2;
  const int batch = dim(rng) + 1;
  const Activation act = seed % 2 == 0 ? Activation::kRelu : Activation::kTanh;
  Rng init(seed ^ 0x9e3779b97f4a7c15ULL);
  const Mlp model = Mlp::initialized(in, hidden, out, act, init);

  Matrix x(batch, in);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  Matrix x2 = x;
  for (Eigen::Index i = 0; i < x2.size(); ++i) x2.data()[i] += 0.3 * u(rng);
  std::vector<Sign> signs;
  std::vector<int> labels;
  for (int i = 0; i < batch; ++i) {
    signs.push_back(rng() % 2 ? Sign::kPositive : Sign::kNegative);
    labels.push_back(static_cast<int>(rng() % static_cast<unsigned>(out)));
  }
  Matrix targets(batch, out);
  for (Eigen::Index i = 0; i < targets.size(); ++i) targets.data()[i] = std::abs(u(rng)) + 0.05;
  for (int i = 0; i < batch; ++i) targets.row(i) /= targets.row(i).sum();
  const double temp = 0.5 + std::abs(u(rng));
  const double divisor = batch;

  std::function<double(const Mlp&)> loss;
  Gradients analytic = Gradients::zeros_like(in, hidden, out);
  const ForwardPass pass = model.forward_batch(x);
  switch (path) {
    case LossPath::kHinge:
      loss = [&](const Mlp& m) { return hinge_batch(m.predict(x), signs, divisor).value; };
      analytic = backward(model, pass, hinge_batch(pass.logits, signs, divisor).logit_grad);
      break;
    case LossPath::kCrossEntropy:
      loss = [&](const Mlp& m) { return cross_entropy_batch(m.predict(x), labels, temp, divisor).value; };
      analytic = backward(model, pass, cross_entropy_batch(pass.logits, labels, temp, divisor).logit_grad);
      break;
    case LossPath::kKl:
      loss = [&](const Mlp& m) { return kl_batch(targets, m.predict(x), temp, divisor).value; };
      analytic = backward(model, pass, kl_batch(targets, pass.logits, temp, divisor).logit_grad);
      break;
    case LossPath::kMse: {
      loss = [&](const Mlp& m) { return squared_difference_batch(m.predict(x), m.predict(x2), divisor).value; };
      const ForwardPass pass2 = model.forward_batch(x2);
      const PairLossGrad lg = squared_difference_batch(pass.logits, pass2.logits, divisor);
      analytic = backward(model, pass, lg.grad_a);
      analytic += backward(model, pass2, lg.grad_b);
      break;
    }
  }
  return max_relative_error(flatten(analytic), numeric_gradient(model, loss));
}

// -- MMD oracles ----------------------------------------------------------------

inline double rbf(const std::vector<double>& a, const std::vector<double>& b, double sigma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

/// The textbook biased estimator as three plain double sums.
inline double naive_mmd2(const PointSet& x, const PointSet& y, double sigma) {
  double kxx = 0.0, kyy = 0.0, kxy = 0.0;
  for (const auto& a : x)
    for (const auto& b : x) kxx += rbf(a, b, sigma);
  for (const auto& a : y)
    for (const auto& b : y) kyy += rbf(a, b, sigma);
  for (const auto& a : x)
    for (const auto& b : y) kxy += rbf(a, b, sigma);
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  return kxx / (nx * nx) + kyy / (ny * ny) - 2.0 * kxy / (nx * ny);
}

/// Marginal term plus class-wise terms, partitioning unlabeled vectors by
/// argmax over the first k entries.
inline double naive_gap(const PointSet& pl, const std::vector<int>& labels, const PointSet& pu, int k, double sigma) {
  double gap = naive_mmd2(pl, pu, sigma);
  for (int c = 0; c < k; ++c) {
    PointSet lc, uc;
    for (std::size_t i = 0; i < pl.size(); ++i)
      if (labels[i] == c) lc.push_back(pl[i]);
    for (const auto& v : pu) {
      const auto best = std::max_element(v.begin(), v.begin() + k) - v.begin();
      if (best == c) uc.push_back(v);
    }
    if (!lc.empty() && !uc.empty()) gap += naive_mmd2(lc, uc, sigma);
  }
  return gap;
}

inline PointSet random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double shift = 0.0) {
  std::normal_distribution<double> g(shift, 1.0);
  PointSet out(n, std::vector<double>(d));
  for (auto& p : out)
    for (auto& v : p) v = g(rng);
  return out;
}

inline PointSet random_probabilities(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::gamma_distribution<double> g(1.0, 1.0);
  PointSet out(n, std::vector<double>(k));
  for (auto& p : out) {
    double s = 0.0;
    for (auto& v : p) s += (v = g(rng) + 1e-9);
    for (auto& v : p) v /= s;
  }
  return out;
}

}  // namespace ossl::testing
