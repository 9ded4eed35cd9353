#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ossl/bank.hpp"
#include "ossl/config.hpp"
#include "ossl/nn.hpp"
#include "ossl/synth.hpp"

namespace ossl {

struct EpochMetrics {
  int epoch = 0;
  double sup_loss = 0.0;
  double unsup_loss = 0.0;
  double st_loss = 0.0;
  double total_loss = 0.0;
  double id_test_accuracy = 0.0;
  std::size_t ood_split_size = 0;
  std::optional<double> mmd_gap_snapshot;

  bool operator==(const EpochMetrics&) const = default;
};

/// 2D problem: labeled A/B points, an unlabeled pool, and a held-out ID test set.
struct PolarTask {
  std::vector<PolarSample> labeled;
  std::vector<PolarSample> unlabeled;
  std::vector<PolarSample> test;
};

/// Toy-image problem with k ID classes; the model head has k + 1 outputs.
struct ImageTask {
  int k_classes = 2;
  std::vector<ToyImage> labeled;
  std::vector<ToyImage> unlabeled;
  std::vector<ToyImage> test;
};

struct TrainResult {
  Mlp model;
  std::vector<EpochMetrics> metrics;
};

// -- Shared helpers ---------------------------------------------------------

/// Rows of Cartesian (x, y).
Matrix polar_inputs(std::span<const PolarSample> samples);
Matrix image_inputs(std::span<const ToyImage> images);

Sign to_sign(PolarClass label);
/// Fraction of labeled samples whose score sign matches the label (score > 0 -> B).
double polar_accuracy(const Mlp& model, std::span<const PolarSample> samples);
/// Fraction of labeled images whose argmax over the first k logits is the label.
double image_accuracy(const Mlp& model, std::span<const ToyImage> images, int k);

/// Probability vectors [P(A), P(B)] from a single-output hinge model.
std::vector<std::vector<double>> polar_probabilities(const Mlp& model, std::span<const PolarSample> samples);
/// First-k softmax probabilities, renormalized to sum to one.
std::vector<std::vector<double>> image_id_probabilities(const Mlp& model, std::span<const ToyImage> images, int k,
                                                        double temperature);

/// Pseudo-label rule: selected iff confidence >= eta.
bool pl_selected(double confidence, double eta);
/// Confidence max(sigma(s), 1 - sigma(s)) and the sign of a hinge score.
struct PseudoLabel {
  double confidence = 0.0;
  Sign label = Sign::kPositive;
};
PseudoLabel polar_pseudo_label(double score);

/// Pseudo-labels for every sample of the pool; nullopt when not selected.
std::vector<std::optional<Sign>> select_polar_pseudo_labels(const Mlp& model, std::span<const PolarSample> pool,
                                                             double eta);
std::vector<std::optional<int>> select_image_pseudo_labels(const Mlp& model, std::span<const ToyImage> pool, int k,
                                                           double eta, double temperature);

// -- Strategies ---------------------------------------------------------------

/// Hinge (2D) or cross-entropy (images) on the labeled set only.
TrainResult train_supervised(Mlp model, const PolarTask& task, const TrainConfig& config);
TrainResult train_supervised(Mlp model, const ImageTask& task, const TrainConfig& config);

/// Supervised for the first epochs/2, then adds lambda * loss on confident
/// pseudo-labels recomputed at the start of every later epoch.
TrainResult train_pl(Mlp model, const PolarTask& task, const TrainConfig& config);
TrainResult train_pl(Mlp model, const ImageTask& task, const TrainConfig& config);

/// 2D consistency training: lambda * mean squared score difference between
/// each unlabeled point and its angle-perturbed copies.
TrainResult train_dact(Mlp model, const PolarTask& task, const TrainConfig& config);

struct DactImageOptions {
  /// Use the EMA memory bank as the consistency target instead of the
  /// instantaneous clean prediction.
  bool bank_targets = false;
  /// Add KL(p(x_l), p(Aug(x_l))) for a labeled partner drawn per unlabeled
  /// sample, weighted and normalized like the style-transfer term.
  bool labeled_partner_consistency = false;
};

/// Image consistency training: lambda_u * KL(target || p(Aug(x_u))).
TrainResult train_dact(Mlp model, const ImageTask& task, const TrainConfig& config, DactImageOptions options = {});

/// Full open-set pipeline: memory bank, periodic OOD splitting, style-
/// transferred labeled content with OOD style, and the three-term loss.
TrainResult train_bgdact(Mlp model, const ImageTask& task, const TrainConfig& config);

}  // namespace ossl
