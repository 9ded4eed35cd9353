#include "ossl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

void require_shape(bool ok, const std::string& what) {
  if (!ok) {
    throw InputShapeError(what);
  }
}

Matrix activate(const Matrix& pre, Activation act) {
  if (act == Activation::kRelu) {
    return pre.cwiseMax(0.0);
  }
  return pre.array().tanh().matrix();
}

void require_divisor(double divisor) {
  if (!(divisor > 0.0) || !std::isfinite(divisor)) {
    throw ParameterError("loss divisor must be positive and finite");
  }
}

double floored_log(double p) { return std::log(std::max(p, kProbFloor)); }

}  // namespace

// -- Gradients ------------------------------------------------------------------

Gradients Gradients::zeros_like(int input_dim, int hidden_dim, int output_dim) {
  return Gradients{Matrix::Zero(hidden_dim, input_dim), Vector::Zero(hidden_dim), Matrix::Zero(output_dim, hidden_dim),
                   Vector::Zero(output_dim)};
}

bool Gradients::same_shape(const Gradients& o) const {
  return weights_1.rows() == o.weights_1.rows() && weights_1.cols() == o.weights_1.cols() &&
         bias_1.size() == o.bias_1.size() && weights_2.rows() == o.weights_2.rows() &&
         weights_2.cols() == o.weights_2.cols() && bias_2.size() == o.bias_2.size();
}

Gradients& Gradients::operator+=(const Gradients& o) {
  require_shape(same_shape(o), "gradient blocks differ in shape");
  weights_1 += o.weights_1;
  bias_1 += o.bias_1;
  weights_2 += o.weights_2;
  bias_2 += o.bias_2;
  return *this;
}

Gradients& Gradients::operator*=(double factor) {
  weights_1 *= factor;
  bias_1 *= factor;
  weights_2 *= factor;
  bias_2 *= factor;
  return *this;
}

// -- Mlp ----------------------------------------------------------------------

Mlp::Mlp(int input_dim, int hidden_dim, int output_dim, Activation activation)
    : weights_1_(Matrix::Zero(hidden_dim, input_dim)),
      bias_1_(Vector::Zero(hidden_dim)),
      weights_2_(Matrix::Zero(output_dim, hidden_dim)),
      bias_2_(Vector::Zero(output_dim)),
      activation_(activation) {
  if (input_dim < 1 || hidden_dim < 1 || output_dim < 1) {
    throw ParameterError("Mlp dimensions must be >= 1");
  }
}

Mlp Mlp::initialized(int input_dim, int hidden_dim, int output_dim, Activation activation, Rng& rng) {
  Mlp m(input_dim, hidden_dim, output_dim, activation);
  const double b1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double b2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  std::uniform_real_distribution<double> d1(-b1, b1);
  std::uniform_real_distribution<double> d2(-b2, b2);
  for (Eigen::Index i = 0; i < m.weights_1_.size(); ++i) m.weights_1_.data()[i] = d1(rng);
  for (Eigen::Index i = 0; i < m.bias_1_.size(); ++i) m.bias_1_[i] = d1(rng);
  for (Eigen::Index i = 0; i < m.weights_2_.size(); ++i) m.weights_2_.data()[i] = d2(rng);
  for (Eigen::Index i = 0; i < m.bias_2_.size(); ++i) m.bias_2_[i] = d2(rng);
  return m;
}

Vector Mlp::forward(std::span<const double> x) const {
  require_shape(static_cast<int>(x.size()) == input_dim(),
                "forward: input has length " + std::to_string(x.size()) + ", expected " + std::to_string(input_dim()));
  const Eigen::Map<const Vector> in(x.data(), static_cast<Eigen::Index>(x.size()));
  Matrix pre = weights_1_ * in + bias_1_;
  Matrix hidden = activate(pre, activation_);
  return weights_2_ * hidden + bias_2_;
}

ForwardPass Mlp::forward_batch(const Matrix& inputs) const {
  require_shape(inputs.cols() == input_dim(), "forward_batch: input width " + std::to_string(inputs.cols()) +
                                                  ", expected " + std::to_string(input_dim()));
  ForwardPass pass;
  pass.inputs = inputs;
  pass.pre_activation = (inputs * weights_1_.transpose()).rowwise() + bias_1_.transpose();
  pass.hidden = activate(pass.pre_activation, activation_);
  pass.logits = (pass.hidden * weights_2_.transpose()).rowwise() + bias_2_.transpose();
  return pass;
}

Matrix Mlp::predict(const Matrix& inputs) const {
  require_shape(inputs.cols() == input_dim(), "predict: input width " + std::to_string(inputs.cols()) +
                                                  ", expected " + std::to_string(input_dim()));
  Matrix pre = (inputs * weights_1_.transpose()).rowwise() + bias_1_.transpose();
  return (activate(pre, activation_) * weights_2_.transpose()).rowwise() + bias_2_.transpose();
}

std::size_t Mlp::parameter_count() const {
  return static_cast<std::size_t>(weights_1_.size() + bias_1_.size() + weights_2_.size() + bias_2_.size());
}

std::vector<double> Mlp::parameters() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  flat.insert(flat.end(), weights_1_.data(), weights_1_.data() + weights_1_.size());
  flat.insert(flat.end(), bias_1_.data(), bias_1_.data() + bias_1_.size());
  flat.insert(flat.end(), weights_2_.data(), weights_2_.data() + weights_2_.size());
  flat.insert(flat.end(), bias_2_.data(), bias_2_.data() + bias_2_.size());
  return flat;
}

void Mlp::set_parameters(std::span<const double> flat) {
  require_shape(flat.size() == parameter_count(), "set_parameters: expected " + std::to_string(parameter_count()) +
                                                      " values, got " + std::to_string(flat.size()));
  const double* p = flat.data();
  std::copy_n(p, weights_1_.size(), weights_1_.data());
  p += weights_1_.size();
  std::copy_n(p, bias_1_.size(), bias_1_.data());
  p += bias_1_.size();
  std::copy_n(p, weights_2_.size(), weights_2_.data());
  p += weights_2_.size();
  std::copy_n(p, bias_2_.size(), bias_2_.data());
}

bool Mlp::all_finite() const {
  return weights_1_.allFinite() && bias_1_.allFinite() && weights_2_.allFinite() && bias_2_.allFinite();
}

bool Mlp::operator==(const Mlp& o) const {
  return activation_ == o.activation_ && input_dim() == o.input_dim() && hidden_dim() == o.hidden_dim() &&
         output_dim() == o.output_dim() && weights_1_ == o.weights_1_ && bias_1_ == o.bias_1_ &&
         weights_2_ == o.weights_2_ && bias_2_ == o.bias_2_;
}

// -- Backpropagation ----------------------------------------------------------------

Gradients backward(const Mlp& model, const ForwardPass& pass, const Matrix& logit_grads) {
  if (!pass.recorded()) {
    throw UsageError("backward called without a recorded forward pass");
  }
  require_shape(pass.inputs.cols() == model.input_dim() && pass.hidden.cols() == model.hidden_dim(),
                "backward: forward pass was recorded for a different model");
  require_shape(logit_grads.rows() == pass.logits.rows() && logit_grads.cols() == pass.logits.cols(),
                "backward: logit gradient shape does not match the forward pass");

  Gradients g;
  g.weights_2 = logit_grads.transpose() * pass.hidden;
  g.bias_2 = logit_grads.colwise().sum().transpose();

  Matrix d_hidden = logit_grads * model.weights_2();
  Matrix d_pre;
  if (model.activation() == Activation::kRelu) {
    d_pre = (pass.pre_activation.array() > 0.0).select(d_hidden, 0.0);
  } else {
    d_pre = d_hidden.array() * (1.0 - pass.hidden.array().square());
  }
  g.weights_1 = d_pre.transpose() * pass.inputs;
  g.bias_1 = d_pre.colwise().sum().transpose();
  return g;
}

// -- Optimizer ---------------------------------------------------------------------

SgdMomentum::SgdMomentum(const Mlp& model)
    : velocity_(Gradients::zeros_like(model.input_dim(), model.hidden_dim(), model.output_dim())) {}

void SgdMomentum::step(Mlp& model, const Gradients& grads, double lr, double momentum, bool nesterov) {
  require_shape(velocity_.same_shape(grads), "sgd_step: gradient shape does not match the model");
  auto update = [&](auto& param, auto& vel, const auto& grad) {
    vel = momentum * vel + grad;
    if (nesterov) {
      param -= lr * (grad + momentum * vel);
    } else {
      param -= lr * vel;
    }
  };
  update(model.weights_1(), velocity_.weights_1, grads.weights_1);
  update(model.bias_1(), velocity_.bias_1, grads.bias_1);
  update(model.weights_2(), velocity_.weights_2, grads.weights_2);
  update(model.bias_2(), velocity_.bias_2, grads.bias_2);
  if (!model.all_finite()) {
    throw NumericalError("sgd_step produced non-finite parameters");
  }
}

double cosine_warmup_lr(int epoch, const TrainConfig& config) {
  if (epoch < 0 || epoch >= config.epochs) {
    throw ParameterError("cosine_warmup_lr: epoch " + std::to_string(epoch) + " outside [0, " +
                         std::to_string(config.epochs) + ")");
  }
  const double base = config.learning_rate;
  if (epoch < config.warmup_epochs) {
    return base * static_cast<double>(epoch) / static_cast<double>(config.warmup_epochs);
  }
  const int span = config.epochs - 1 - config.warmup_epochs;
  if (span <= 0) {
    return base;
  }
  const double progress = static_cast<double>(epoch - config.warmup_epochs) / static_cast<double>(span);
  return base * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
}

// -- Per-sample losses -------------------------------------------------------------

Vector softmax_t(std::span<const double> logits, double temperature) {
  if (!(temperature > 0.0)) {
    throw ParameterError("softmax temperature must be > 0");
  }
  require_shape(!logits.empty(), "softmax of an empty vector");
  Vector z = Eigen::Map<const Vector>(logits.data(), static_cast<Eigen::Index>(logits.size())) / temperature;
  z.array() -= z.maxCoeff();
  z = z.array().exp().matrix();
  return z / z.sum();
}

double hinge_loss(double score, Sign label) {
  return std::max(0.0, 1.0 - static_cast<double>(static_cast<int>(label)) * score);
}

double cross_entropy(int target, std::span<const double> probs) {
  require_shape(target >= 0 && static_cast<std::size_t>(target) < probs.size(),
                "cross_entropy: target index outside the probability vector");
  return -floored_log(probs[static_cast<std::size_t>(target)]);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  require_shape(p.size() == q.size(), "kl_divergence: length mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      kl += p[i] * (floored_log(p[i]) - floored_log(q[i]));
    }
  }
  return std::max(kl, 0.0);
}

double mse_consistency(std::span<const double> a, std::span<const double> b) {
  require_shape(a.size() == b.size(), "mse_consistency: length mismatch");
  if (a.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

double score_probability(double score) {
  if (score >= 0.0) {
    return 1.0 / (1.0 + std::exp(-score));
  }
  const double e = std::exp(score);
  return e / (1.0 + e);
}

// -- Batched losses --------------------------------------------------------------

Matrix softmax_rows(const Matrix& logits, double temperature) {
  if (!(temperature > 0.0)) {
    throw ParameterError("softmax temperature must be > 0");
  }
  Matrix z = logits / temperature;
  Vector max = z.rowwise().maxCoeff();
  z.colwise() -= max;
  z = z.array().exp().matrix();
  Vector sums = z.rowwise().sum();
  return z.array().colwise() / sums.array();
}

LossGrad hinge_batch(const Matrix& scores, std::span<const Sign> labels, double divisor) {
  require_divisor(divisor);
  require_shape(scores.cols() == 1, "hinge_batch: scores must have one column");
  require_shape(static_cast<std::size_t>(scores.rows()) == labels.size(), "hinge_batch: label count mismatch");
  LossGrad out{0.0, Matrix::Zero(scores.rows(), 1)};
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double y = static_cast<double>(static_cast<int>(labels[static_cast<std::size_t>(i)]));
    const double margin = 1.0 - y * scores(i, 0);
    if (margin > 0.0) {
      out.value += margin;
      out.logit_grad(i, 0) = -y / divisor;
    }
  }
  out.value /= divisor;
  return out;
}

LossGrad cross_entropy_batch(const Matrix& logits, std::span<const int> labels, double temperature, double divisor) {
  require_divisor(divisor);
  require_shape(static_cast<std::size_t>(logits.rows()) == labels.size(), "cross_entropy_batch: label count mismatch");
  LossGrad out;
  Matrix probs = softmax_rows(logits, temperature);
  out.logit_grad = probs;
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    require_shape(y >= 0 && y < logits.cols(), "cross_entropy_batch: label outside the head");
    out.value -= floored_log(probs(i, y));
    out.logit_grad(i, y) -= 1.0;
  }
  out.value /= divisor;
  out.logit_grad /= temperature * divisor;
  return out;
}

LossGrad kl_batch(const Matrix& targets, const Matrix& logits, double temperature, double divisor) {
  require_divisor(divisor);
  require_shape(targets.rows() == logits.rows() && targets.cols() == logits.cols(), "kl_batch: shape mismatch");
  LossGrad out;
  Matrix probs = softmax_rows(logits, temperature);
  for (Eigen::Index i = 0; i < targets.rows(); ++i) {
    for (Eigen::Index c = 0; c < targets.cols(); ++c) {
      const double t = targets(i, c);
      if (t > 0.0) {
        out.value += t * (floored_log(t) - floored_log(probs(i, c)));
      }
    }
  }
  Vector mass = targets.rowwise().sum();
  out.logit_grad = (probs.array().colwise() * mass.array()).matrix() - targets;
  out.value /= divisor;
  out.logit_grad /= temperature * divisor;
  return out;
}

PairLossGrad squared_difference_batch(const Matrix& a, const Matrix& b, double divisor) {
  require_divisor(divisor);
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "squared_difference_batch: shape mismatch");
  Matrix diff = a - b;
  PairLossGrad out;
  out.value = diff.squaredNorm() / divisor;
  out.grad_a = (2.0 / divisor) * diff;
  out.grad_b = -out.grad_a;
  return out;
}

}  // namespace ossl
