#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ossl/config.hpp"
#include "ossl/rng.hpp"

namespace ossl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Probability floor inside every log term.
inline constexpr double kProbFloor = 1e-12;

/// Gradient (or velocity) with the same block structure as an Mlp.
struct Gradients {
  Matrix weights_1;  // hidden x input
  Vector bias_1;     // hidden
  Matrix weights_2;  // output x hidden
  Vector bias_2;     // output

  static Gradients zeros_like(int input_dim, int hidden_dim, int output_dim);

  Gradients& operator+=(const Gradients& other);
  Gradients& operator*=(double factor);
  [[nodiscard]] bool same_shape(const Gradients& other) const;
};

/// Intermediates of one batched forward pass, consumed by backward().
struct ForwardPass {
  Matrix inputs;          // batch x input
  Matrix pre_activation;  // batch x hidden
  Matrix hidden;          // batch x hidden
  Matrix logits;          // batch x output

  [[nodiscard]] bool recorded() const { return inputs.rows() > 0; }
};

/// One-hidden-layer perceptron. A single output unit is used as a signed
/// hinge score; several outputs are read through a temperature softmax.
class Mlp {
public:
  Mlp(int input_dim, int hidden_dim, int output_dim, Activation activation = Activation::kRelu);

  /// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static Mlp initialized(int input_dim, int hidden_dim, int output_dim, Activation activation, Rng& rng);

  [[nodiscard]] int input_dim() const { return static_cast<int>(weights_1_.cols()); }
  [[nodiscard]] int hidden_dim() const { return static_cast<int>(weights_1_.rows()); }
  [[nodiscard]] int output_dim() const { return static_cast<int>(weights_2_.rows()); }
  [[nodiscard]] Activation activation() const { return activation_; }

  [[nodiscard]] Vector forward(std::span<const double> x) const;
  [[nodiscard]] ForwardPass forward_batch(const Matrix& inputs) const;
  /// Logits only; no intermediates kept.
  [[nodiscard]] Matrix predict(const Matrix& inputs) const;

  [[nodiscard]] const Matrix& weights_1() const { return weights_1_; }
  [[nodiscard]] const Vector& bias_1() const { return bias_1_; }
  [[nodiscard]] const Matrix& weights_2() const { return weights_2_; }
  [[nodiscard]] const Vector& bias_2() const { return bias_2_; }
  Matrix& weights_1() { return weights_1_; }
  Vector& bias_1() { return bias_1_; }
  Matrix& weights_2() { return weights_2_; }
  Vector& bias_2() { return bias_2_; }

  /// Flattened parameter view, block order w1, b1, w2, b2 (column-major).
  [[nodiscard]] std::vector<double> parameters() const;
  void set_parameters(std::span<const double> flat);
  [[nodiscard]] std::size_t parameter_count() const;

  [[nodiscard]] bool all_finite() const;
  bool operator==(const Mlp& other) const;

private:
  Matrix weights_1_;
  Vector bias_1_;
  Matrix weights_2_;
  Vector bias_2_;
  Activation activation_;
};

/// Gradient of a scalar loss w.r.t. all parameters, given dLoss/dLogits for
/// the same batch that produced `pass`.
Gradients backward(const Mlp& model, const ForwardPass& pass, const Matrix& logit_grads);

/// SGD with classical or Nesterov momentum; owns the velocity buffers.
/// Update: v <- mu*v + g; plain: p -= lr*v; Nesterov: p -= lr*(g + mu*v).
class SgdMomentum {
public:
  explicit SgdMomentum(const Mlp& model);

  void step(Mlp& model, const Gradients& grads, double lr, double momentum, bool nesterov);
  [[nodiscard]] const Gradients& velocity() const { return velocity_; }

private:
  Gradients velocity_;
};

/// Linear warmup from 0 to config.learning_rate, then cosine decay reaching 0
/// at epoch == config.epochs - 1.
double cosine_warmup_lr(int epoch, const TrainConfig& config);

// -- Per-sample losses ----------------------------------------------------

enum class Sign : int { kNegative = -1, kPositive = 1 };

Vector softmax_t(std::span<const double> logits, double temperature);
double hinge_loss(double score, Sign label);
double cross_entropy(int target, std::span<const double> probs);
/// KL(p || q) with 0*log(0) := 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double mse_consistency(std::span<const double> a, std::span<const double> b);

/// Logistic of a hinge score: probability of the positive class.
double score_probability(double score);

// -- Batched losses with logit gradients ------------------------------------
// Each returns sum(per-sample loss) / divisor together with dLoss/dLogits.

struct LossGrad {
  double value = 0.0;
  Matrix logit_grad;
};

/// Hinge on single-column scores; labels[i] in {-1, +1}.
LossGrad hinge_batch(const Matrix& scores, std::span<const Sign> labels, double divisor);
/// Cross-entropy of softmax(logits / T).
LossGrad cross_entropy_batch(const Matrix& logits, std::span<const int> labels, double temperature, double divisor);
/// KL(targets || softmax(logits / T)); targets are constants.
LossGrad kl_batch(const Matrix& targets, const Matrix& logits, double temperature, double divisor);

/// Squared-difference consistency between two score matrices of equal shape,
/// differentiated through both sides: value = sum((a-b)^2) / divisor.
struct PairLossGrad {
  double value = 0.0;
  Matrix grad_a;
  Matrix grad_b;
};
PairLossGrad squared_difference_batch(const Matrix& a, const Matrix& b, double divisor);

/// Row-wise temperature softmax.
Matrix softmax_rows(const Matrix& logits, double temperature);

}  // namespace ossl
