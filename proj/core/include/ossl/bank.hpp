#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <vector>

#include "ossl/nn.hpp"

namespace ossl {

/// Per-unlabeled-sample exponential moving average of (K+1)-way predictions.
/// Every entry starts as the one-hot OOD vector [0, ..., 0, 1].
class PredictionBank {
public:
  PredictionBank(std::size_t n_samples, int k_classes, double alpha);

  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] int k_classes() const { return k_; }
  [[nodiscard]] double alpha() const { return alpha_; }

  [[nodiscard]] const Vector& entry(std::size_t idx) const;

  /// entry <- alpha * entry + (1 - alpha) * current; returns the new entry.
  const Vector& update(std::size_t idx, std::span<const double> current);

private:
  std::vector<Vector> entries_;
  int k_;
  double alpha_;
};

struct OodSplit {
  std::set<std::size_t> ood_indices;
  int epoch_computed = 0;

  [[nodiscard]] bool contains(std::size_t idx) const { return ood_indices.count(idx) != 0; }
};

/// Indices whose bank argmax is the OOD slot (position k). A tie between the
/// OOD slot and any ID class counts as OOD.
OodSplit split_ood(const PredictionBank& bank, int k, int epoch = 0);

}  // namespace ossl
