#include "ossl/bank.hpp"

#include <string>

#include "ossl/errors.hpp"

namespace ossl {

PredictionBank::PredictionBank(std::size_t n_samples, int k_classes, double alpha) : k_(k_classes), alpha_(alpha) {
  if (k_classes < 1) {
    throw ParameterError("PredictionBank: k_classes must be >= 1");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("PredictionBank: alpha must be in [0,1]");
  }
  Vector init = Vector::Zero(k_classes + 1);
  init[k_classes] = 1.0;
  entries_.assign(n_samples, init);
}

const Vector& PredictionBank::entry(std::size_t idx) const {
  if (idx >= entries_.size()) {
    throw UsageError("PredictionBank: unknown sample index " + std::to_string(idx));
  }
  return entries_[idx];
}

const Vector& PredictionBank::update(std::size_t idx, std::span<const double> current) {
  if (idx >= entries_.size()) {
    throw UsageError("PredictionBank: unknown sample index " + std::to_string(idx));
  }
  if (current.size() != static_cast<std::size_t>(k_ + 1)) {
    throw InputShapeError("PredictionBank: expected a probability vector of length K+1");
  }
  Vector& e = entries_[idx];
  const Eigen::Map<const Vector> cur(current.data(), static_cast<Eigen::Index>(current.size()));
  e = alpha_ * e + (1.0 - alpha_) * cur;
  return e;
}

OodSplit split_ood(const PredictionBank& bank, int k, int epoch) {
  if (k != bank.k_classes()) {
    throw ParameterError("split_ood: k does not match the bank");
  }
  OodSplit split;
  split.epoch_computed = epoch;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const Vector& e = bank.entry(i);
    const double ood = e[k];
    bool is_ood = true;
    for (int c = 0; c < k; ++c) {
      if (e[c] > ood) {
        is_ood = false;
        break;
      }
    }
    if (is_ood) {
      split.ood_indices.insert(split.ood_indices.end(), i);
    }
  }
  return split;
}

}  // namespace ossl
