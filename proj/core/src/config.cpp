#include "ossl/config.hpp"

#include <cmath>
#include <string>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw ConfigError("invalid TrainConfig: " + what);
  }
}

bool unit_interval(const Interval& i) { return i.lo <= i.hi && i.lo >= 0.0 && i.hi <= 1.0; }

}  // namespace

void validate(const TrainConfig& c) {
  require(c.epochs >= 1, "epochs must be >= 1");
  require(c.labeled_batch >= 1, "labeled_batch must be >= 1");
  require(c.unlabeled_batch >= 1, "unlabeled_batch must be >= 1");
  require(c.hidden_dim >= 1, "hidden_dim must be >= 1");
  require(std::isfinite(c.learning_rate) && c.learning_rate >= 0.0, "learning_rate must be finite and >= 0");
  require(c.warmup_epochs >= 0 && c.warmup_epochs < c.epochs, "warmup_epochs must be in [0, epochs)");
  require(c.sgd_momentum >= 0.0 && c.sgd_momentum <= 1.0, "sgd_momentum must be in [0,1]");
  require(std::isfinite(c.lambda) && c.lambda >= 0.0, "lambda must be finite and >= 0");
  require(std::isfinite(c.lambda_u) && c.lambda_u >= 0.0, "lambda_u must be finite and >= 0");
  require(c.pl_threshold > 0.0 && c.pl_threshold <= 1.0, "pl_threshold must be in (0,1]");
  require(std::isfinite(c.softmax_temperature) && c.softmax_temperature > 0.0, "softmax_temperature must be > 0");
  require(c.ema_alpha >= 0.0 && c.ema_alpha <= 1.0, "ema_alpha must be in [0,1]");
  require(unit_interval(c.beta_range), "beta_range must be an ordered sub-interval of [0,1]");
  require(unit_interval(c.omega_range), "omega_range must be an ordered sub-interval of [0,1]");
  require(c.split_epoch_interval >= 0, "split_epoch_interval must be >= 0");
  require(std::isfinite(c.aug_theta_max) && c.aug_theta_max > 0.0, "aug_theta_max must be > 0");
  require(c.aug_count >= 1, "aug_count must be >= 1");
}

}  // namespace ossl
