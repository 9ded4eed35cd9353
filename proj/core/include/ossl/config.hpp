#pragma once

#include <cstdint>
#include <numbers>

namespace ossl {

/// Closed interval [lo, hi]; lo == hi denotes a fixed value.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double v) const { return v >= lo && v <= hi; }
  bool operator==(const Interval&) const = default;
};

enum class Activation { kRelu, kTanh };

/// Every hyperparameter a strategy may read. Defaults are the 2D experiment
/// settings; toy-image runs override several of them.
struct TrainConfig {
  int epochs = 1000;
  int labeled_batch = 256;
  int unlabeled_batch = 256;
  int hidden_dim = 100;
  Activation activation = Activation::kRelu;

  double learning_rate = 0.05;
  int warmup_epochs = 0;
  double sgd_momentum = 0.9;
  bool nesterov = true;

  double lambda = 0.1;     // unlabeled weight in L_sup + lambda * L_unsup
  double lambda_u = 5.0;   // consistency weight of the image-mode objective
  double pl_threshold = 0.9;
  double softmax_temperature = 0.8;

  double ema_alpha = 0.8;
  Interval beta_range{0.0, 0.5};
  Interval omega_range{0.0, 0.5};
  int split_epoch_interval = 500;  // 0 disables OOD re-splitting

  double aug_theta_max = std::numbers::pi / 8.0;
  int aug_count = 2;

  std::uint64_t seed = 0;

  bool operator==(const TrainConfig&) const = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const TrainConfig& config);

}  // namespace ossl
