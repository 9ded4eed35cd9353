#include "ossl/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ossl/augment.hpp"
#include "ossl/errors.hpp"
#include "ossl/style.hpp"

namespace ossl {
namespace {

using Indices = std::vector<std::size_t>;

// Batches for one epoch: one pass over a shuffled labeled set; each labeled
// batch is paired with the next chunk of a shuffled unlabeled permutation.
struct EpochPlan {
  std::vector<Indices> labeled;
  std::vector<Indices> unlabeled;
};

EpochPlan plan_epoch(const TrainConfig& cfg, int epoch, std::size_t n_labeled, std::size_t n_unlabeled) {
  EpochPlan plan;
  Indices lperm(n_labeled);
  std::iota(lperm.begin(), lperm.end(), std::size_t{0});
  Rng lrng = make_rng(cfg.seed, Stream::kLabeledOrder, {static_cast<std::uint64_t>(epoch)});
  std::shuffle(lperm.begin(), lperm.end(), lrng);
  const auto lb = static_cast<std::size_t>(cfg.labeled_batch);
  for (std::size_t start = 0; start < n_labeled; start += lb) {
    plan.labeled.emplace_back(lperm.begin() + static_cast<std::ptrdiff_t>(start),
                              lperm.begin() + static_cast<std::ptrdiff_t>(std::min(n_labeled, start + lb)));
  }
  if (n_unlabeled == 0) {
    plan.unlabeled.assign(plan.labeled.size(), Indices{});
    return plan;
  }
  Indices uperm(n_unlabeled);
  std::iota(uperm.begin(), uperm.end(), std::size_t{0});
  Rng urng = make_rng(cfg.seed, Stream::kUnlabeledOrder, {static_cast<std::uint64_t>(epoch)});
  std::shuffle(uperm.begin(), uperm.end(), urng);
  const std::size_t ub = std::min(static_cast<std::size_t>(cfg.unlabeled_batch), n_unlabeled);
  for (std::size_t step = 0; step < plan.labeled.size(); ++step) {
    Indices batch(ub);
    for (std::size_t j = 0; j < ub; ++j) {
      batch[j] = uperm[(step * ub + j) % n_unlabeled];
    }
    plan.unlabeled.push_back(std::move(batch));
  }
  return plan;
}

// Running per-epoch loss averages. total is accumulated from the per-step
// objective, independently of the component averages.
struct LossMeter {
  double sup = 0.0;
  double unsup = 0.0;
  double st = 0.0;
  double total = 0.0;
  int steps = 0;

  void add(double s, double u, double t) {
    const double step_total = s + u + t;
    if (!std::isfinite(step_total)) {
      throw NumericalError("non-finite training loss (sup=" + std::to_string(s) + ", unsup=" + std::to_string(u) +
                           ", st=" + std::to_string(t) + ")");
    }
    sup += s;
    unsup += u;
    st += t;
    total += step_total;
    ++steps;
  }

  EpochMetrics finish(int epoch, double accuracy, std::size_t split_size) const {
    const double n = steps > 0 ? static_cast<double>(steps) : 1.0;
    return EpochMetrics{epoch, sup / n, unsup / n, st / n, total / n, accuracy, split_size, std::nullopt};
  }
};

Gradients zero_grads(const Mlp& m) { return Gradients::zeros_like(m.input_dim(), m.hidden_dim(), m.output_dim()); }

void scale(LossGrad& lg, double w) {
  lg.value *= w;
  lg.logit_grad *= w;
}

template <typename T>
std::vector<T> gather(std::span<const T> all, const Indices& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(all[i]);
  return out;
}

void require_nonempty_labeled(std::size_t n) {
  if (n == 0) {
    throw ParameterError("training needs a nonempty labeled set");
  }
}

// -- 2D -------------------------------------------------------------------------------

void require_polar_model(const Mlp& m) {
  if (m.input_dim() != 2 || m.output_dim() != 1) {
    throw ConfigError("2D strategies need a 2-input, single-output hinge model");
  }
}

std::vector<Sign> polar_labels(std::span<const PolarSample> s) {
  std::vector<Sign> out;
  out.reserve(s.size());
  for (const auto& p : s) {
    if (!p.label) {
      throw ParameterError("labeled 2D sample without a label");
    }
    out.push_back(to_sign(*p.label));
  }
  return out;
}

// Supervised hinge term for one batch; accumulates into grads, returns the loss.
double polar_sup_step(const Mlp& model, const PolarTask& task, const Indices& batch, Gradients& grads) {
  const auto samples = gather<PolarSample>(task.labeled, batch);
  const auto labels = polar_labels(samples);
  ForwardPass pass = model.forward_batch(polar_inputs(samples));
  LossGrad lg = hinge_batch(pass.logits, labels, static_cast<double>(batch.size()));
  grads += backward(model, pass, lg.logit_grad);
  return lg.value;
}

enum class PolarUnsup { kNone, kPseudoLabel, kConsistency };

TrainResult train_polar(Mlp model, const PolarTask& task, const TrainConfig& cfg, PolarUnsup kind) {
  validate(cfg);
  require_polar_model(model);
  require_nonempty_labeled(task.labeled.size());

  const bool uses_unlabeled = kind != PolarUnsup::kNone && cfg.lambda > 0.0 && !task.unlabeled.empty();
  SgdMomentum opt(model);
  TrainResult result{model, {}};
  Mlp& m = result.model;
  std::vector<std::optional<Sign>> pseudo;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cosine_warmup_lr(epoch, cfg);
    const EpochPlan plan = plan_epoch(cfg, epoch, task.labeled.size(), uses_unlabeled ? task.unlabeled.size() : 0);
    const bool pl_phase = kind == PolarUnsup::kPseudoLabel && uses_unlabeled && epoch >= cfg.epochs / 2;
    if (pl_phase) {
      pseudo = select_polar_pseudo_labels(m, task.unlabeled, cfg.pl_threshold);
    }

    LossMeter meter;
    for (std::size_t step = 0; step < plan.labeled.size(); ++step) {
      Gradients grads = zero_grads(m);
      const double sup = polar_sup_step(m, task, plan.labeled[step], grads);
      double unsup = 0.0;
      const Indices& ub = plan.unlabeled[step];

      if (pl_phase) {
        std::vector<PolarSample> chosen;
        std::vector<Sign> labels;
        for (std::size_t i : ub) {
          if (pseudo[i]) {
            chosen.push_back(task.unlabeled[i]);
            labels.push_back(*pseudo[i]);
          }
        }
        if (!chosen.empty()) {
          ForwardPass pass = m.forward_batch(polar_inputs(chosen));
          LossGrad lg = hinge_batch(pass.logits, labels, static_cast<double>(ub.size()));
          scale(lg, cfg.lambda);
          grads += backward(m, pass, lg.logit_grad);
          unsup = lg.value;
        }
      } else if (kind == PolarUnsup::kConsistency && uses_unlabeled) {
        const auto clean = gather<PolarSample>(task.unlabeled, ub);
        Rng aug_rng = make_rng(cfg.seed, Stream::kAugment,
                               {static_cast<std::uint64_t>(epoch), static_cast<std::uint64_t>(step)});
        std::vector<PolarSample> augmented;
        augmented.reserve(clean.size() * static_cast<std::size_t>(cfg.aug_count));
        for (const auto& s : clean) {
          auto copies = augment_angle(s, cfg.aug_theta_max, cfg.aug_count, aug_rng);
          augmented.insert(augmented.end(), copies.begin(), copies.end());
        }
        const auto nd = static_cast<Eigen::Index>(cfg.aug_count);
        ForwardPass clean_pass = m.forward_batch(polar_inputs(clean));
        ForwardPass aug_pass = m.forward_batch(polar_inputs(augmented));
        Matrix repeated(aug_pass.logits.rows(), 1);
        for (Eigen::Index i = 0; i < clean_pass.logits.rows(); ++i) {
          repeated.block(i * nd, 0, nd, 1).setConstant(clean_pass.logits(i, 0));
        }
        PairLossGrad pg = squared_difference_batch(repeated, aug_pass.logits, static_cast<double>(augmented.size()));
        Matrix clean_grad(clean_pass.logits.rows(), 1);
        for (Eigen::Index i = 0; i < clean_pass.logits.rows(); ++i) {
          clean_grad(i, 0) = pg.grad_a.block(i * nd, 0, nd, 1).sum();
        }
        clean_grad *= cfg.lambda;
        pg.grad_b *= cfg.lambda;
        unsup = cfg.lambda * pg.value;
        grads += backward(m, clean_pass, clean_grad);
        grads += backward(m, aug_pass, pg.grad_b);
      }

      meter.add(sup, unsup, 0.0);
      opt.step(m, grads, lr, cfg.sgd_momentum, cfg.nesterov);
    }
    const double acc = task.test.empty() ? 0.0 : polar_accuracy(m, task.test);
    result.metrics.push_back(meter.finish(epoch + 1, acc, 0));
  }
  return result;
}

// -- Images ----------------------------------------------------------------------------

void require_image_model(const Mlp& m, const ImageTask& task) {
  if (task.k_classes < 2) {
    throw ConfigError("image strategies need k_classes >= 2");
  }
  if (m.output_dim() != task.k_classes + 1) {
    throw ConfigError("image strategies need a K+1 output head (expected " + std::to_string(task.k_classes + 1) +
                      ", got " + std::to_string(m.output_dim()) + ")");
  }
  if (!task.labeled.empty() && static_cast<std::size_t>(m.input_dim()) != task.labeled.front().pixels.size()) {
    throw ConfigError("image model input width does not match the image size");
  }
}

std::vector<int> image_labels(std::span<const ToyImage> imgs) {
  std::vector<int> out;
  out.reserve(imgs.size());
  for (const auto& im : imgs) {
    if (!im.label) {
      throw ParameterError("labeled image without a label");
    }
    out.push_back(*im.label);
  }
  return out;
}

double image_sup_step(const Mlp& model, const std::vector<ToyImage>& batch, double temperature, Gradients& grads) {
  ForwardPass pass = model.forward_batch(image_inputs(batch));
  LossGrad lg = cross_entropy_batch(pass.logits, image_labels(batch), temperature, static_cast<double>(batch.size()));
  grads += backward(model, pass, lg.logit_grad);
  return lg.value;
}

// weight * KL(targets || p(Aug(x))) for each image, accumulated into grads.
double consistency_term(const Mlp& model, const Matrix& targets, const std::vector<ToyImage>& images, Rng& aug_rng,
                        double temperature, double weight, double divisor, Gradients& grads) {
  std::vector<ToyImage> augmented;
  augmented.reserve(images.size());
  for (const auto& im : images) augmented.push_back(image_aug(im, aug_rng));
  ForwardPass pass = model.forward_batch(image_inputs(augmented));
  LossGrad lg = kl_batch(targets, pass.logits, temperature, divisor);
  scale(lg, weight);
  grads += backward(model, pass, lg.logit_grad);
  return lg.value;
}

std::vector<std::size_t> draw_partners(Rng& rng, std::size_t n, std::size_t labeled_batch_size) {
  std::uniform_int_distribution<std::size_t> pick(0, labeled_batch_size - 1);
  std::vector<std::size_t> out(n);
  for (auto& p : out) p = pick(rng);
  return out;
}

std::uint64_t u64(int v) { return static_cast<std::uint64_t>(v); }

enum class ImageUnsup { kNone, kPseudoLabel, kConsistency, kBridged };

struct ImageRunSpec {
  ImageUnsup kind = ImageUnsup::kNone;
  bool bank_targets = false;
  bool partner_consistency = false;
};

TrainResult train_image(Mlp model, const ImageTask& task, const TrainConfig& cfg, ImageRunSpec spec) {
  validate(cfg);
  require_image_model(model, task);
  require_nonempty_labeled(task.labeled.size());
  const int k = task.k_classes;
  const double temp = cfg.softmax_temperature;

  bool uses_unlabeled = !task.unlabeled.empty();
  if (spec.kind == ImageUnsup::kNone) uses_unlabeled = false;
  if (spec.kind == ImageUnsup::kPseudoLabel && !(cfg.lambda > 0.0)) uses_unlabeled = false;

  const bool bridged = spec.kind == ImageUnsup::kBridged;
  const bool need_bank = bridged || spec.bank_targets;
  std::optional<PredictionBank> bank;
  if (need_bank) bank.emplace(task.unlabeled.size(), k, cfg.ema_alpha);
  OodSplit split;
  if (bridged) split = split_ood(*bank, k, 0);

  SgdMomentum opt(model);
  TrainResult result{model, {}};
  Mlp& m = result.model;
  std::vector<std::optional<int>> pseudo;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const int epoch1 = epoch + 1;
    const double lr = cosine_warmup_lr(epoch, cfg);
    const EpochPlan plan = plan_epoch(cfg, epoch, task.labeled.size(), uses_unlabeled ? task.unlabeled.size() : 0);
    if (bridged && cfg.split_epoch_interval > 0 && epoch1 % cfg.split_epoch_interval == 0) {
      split = split_ood(*bank, k, epoch1);
    }
    const bool pl_phase = spec.kind == ImageUnsup::kPseudoLabel && uses_unlabeled && epoch >= cfg.epochs / 2;
    if (pl_phase) {
      pseudo = select_image_pseudo_labels(m, task.unlabeled, k, cfg.pl_threshold, temp);
    }

    LossMeter meter;
    for (std::size_t step = 0; step < plan.labeled.size(); ++step) {
      Gradients grads = zero_grads(m);
      const auto labeled = gather<ToyImage>(task.labeled, plan.labeled[step]);
      const double sup = image_sup_step(m, labeled, temp, grads);
      double unsup = 0.0;
      double st = 0.0;
      const Indices& ub = plan.unlabeled[step];
      const double divisor = static_cast<double>(ub.size());
      const std::initializer_list<std::uint64_t> coords0 = {u64(epoch), static_cast<std::uint64_t>(step), 0};

      if (pl_phase) {
        std::vector<ToyImage> chosen;
        std::vector<int> labels;
        for (std::size_t i : ub) {
          if (pseudo[i]) {
            chosen.push_back(task.unlabeled[i]);
            labels.push_back(*pseudo[i]);
          }
        }
        if (!chosen.empty()) {
          ForwardPass pass = m.forward_batch(image_inputs(chosen));
          LossGrad lg = cross_entropy_batch(pass.logits, labels, temp, divisor);
          scale(lg, cfg.lambda);
          grads += backward(m, pass, lg.logit_grad);
          unsup = lg.value;
        }
      } else if (uses_unlabeled && spec.kind != ImageUnsup::kPseudoLabel) {
        const auto clean = gather<ToyImage>(task.unlabeled, ub);
        Matrix targets = softmax_rows(m.predict(image_inputs(clean)), temp);
        if (need_bank) {
          for (std::size_t j = 0; j < ub.size(); ++j) {
            const Vector current = targets.row(static_cast<Eigen::Index>(j)).transpose();
            targets.row(static_cast<Eigen::Index>(j)) =
                bank->update(ub[j], std::span<const double>(current.data(), current.size())).transpose();
          }
        }
        if (cfg.lambda_u > 0.0) {
          Rng aug_rng = make_rng(cfg.seed, Stream::kAugment, coords0);
          unsup = consistency_term(m, targets, clean, aug_rng, temp, cfg.lambda_u, divisor, grads);
        }

        if (bridged || spec.partner_consistency) {
          const std::initializer_list<std::uint64_t> coords = {u64(epoch), static_cast<std::uint64_t>(step)};
          Rng partner_rng = make_rng(cfg.seed, Stream::kPartner, coords);
          Rng beta_rng = make_rng(cfg.seed, Stream::kBeta, coords);
          const auto partners = draw_partners(partner_rng, ub.size(), labeled.size());
          std::vector<ToyImage> synthesized;
          for (std::size_t j = 0; j < ub.size(); ++j) {
            const double beta = uniform(beta_rng, cfg.beta_range.lo, cfg.beta_range.hi);
            if (bridged && !split.contains(ub[j])) continue;
            const ToyImage& partner = labeled[partners[j]];
            if (bridged) {
              // Content from the labeled partner, style from the OOD sample.
              synthesized.push_back(interpolate_st(adain_transfer(partner, clean[j]), partner, beta));
            } else {
              synthesized.push_back(partner);
            }
          }
          if (!synthesized.empty()) {
            const Matrix st_targets = softmax_rows(m.predict(image_inputs(synthesized)), temp);
            Rng aug_rng = make_rng(cfg.seed, Stream::kAugment, {u64(epoch), static_cast<std::uint64_t>(step), 1});
            st = consistency_term(m, st_targets, synthesized, aug_rng, temp, 1.0, divisor, grads);
          }
        }
      }

      meter.add(sup, unsup, st);
      opt.step(m, grads, lr, cfg.sgd_momentum, cfg.nesterov);
    }
    const double acc = task.test.empty() ? 0.0 : image_accuracy(m, task.test, k);
    result.metrics.push_back(meter.finish(epoch1, acc, bridged ? split.ood_indices.size() : 0));
  }
  return result;
}

}  // namespace

// -- Helpers ---------------------------------------------------------------------------

Matrix polar_inputs(std::span<const PolarSample> samples) {
  Matrix x(static_cast<Eigen::Index>(samples.size()), 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    x(static_cast<Eigen::Index>(i), 0) = samples[i].x();
    x(static_cast<Eigen::Index>(i), 1) = samples[i].y();
  }
  return x;
}

Matrix image_inputs(std::span<const ToyImage> images) {
  if (images.empty()) {
    return Matrix(0, 0);
  }
  const auto width = static_cast<Eigen::Index>(images.front().pixels.size());
  Matrix x(static_cast<Eigen::Index>(images.size()), width);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (static_cast<Eigen::Index>(images[i].pixels.size()) != width) {
      throw InputShapeError("image_inputs: images differ in size");
    }
    x.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::RowVectorXd>(images[i].pixels.data(), width);
  }
  return x;
}

Sign to_sign(PolarClass label) { return label == PolarClass::kB ? Sign::kPositive : Sign::kNegative; }

double polar_accuracy(const Mlp& model, std::span<const PolarSample> samples) {
  if (samples.empty()) {
    throw ParameterError("polar_accuracy: empty sample set");
  }
  const Matrix scores = model.predict(polar_inputs(samples));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].label) {
      throw ParameterError("polar_accuracy: unlabeled sample");
    }
    const bool predicted_b = scores(static_cast<Eigen::Index>(i), 0) > 0.0;
    correct += (predicted_b == (*samples[i].label == PolarClass::kB)) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double image_accuracy(const Mlp& model, std::span<const ToyImage> images, int k) {
  if (images.empty()) {
    throw ParameterError("image_accuracy: empty image set");
  }
  const Matrix logits = model.predict(image_inputs(images));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].label) {
      throw ParameterError("image_accuracy: unlabeled image");
    }
    Eigen::Index best = 0;
    logits.row(static_cast<Eigen::Index>(i)).head(k).maxCoeff(&best);
    correct += (static_cast<int>(best) == *images[i].label) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(images.size());
}

std::vector<std::vector<double>> polar_probabilities(const Mlp& model, std::span<const PolarSample> samples) {
  std::vector<std::vector<double>> out;
  out.reserve(samples.size());
  if (samples.empty()) return out;
  const Matrix scores = model.predict(polar_inputs(samples));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double pb = score_probability(scores(i, 0));
    out.push_back({1.0 - pb, pb});
  }
  return out;
}

std::vector<std::vector<double>> image_id_probabilities(const Mlp& model, std::span<const ToyImage> images, int k,
                                                        double temperature) {
  std::vector<std::vector<double>> out;
  out.reserve(images.size());
  if (images.empty()) return out;
  const Matrix probs = softmax_rows(model.predict(image_inputs(images)), temperature);
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    std::vector<double> p(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
      p[static_cast<std::size_t>(c)] = probs(i, c);
      sum += probs(i, c);
    }
    for (double& v : p) v /= sum;
    out.push_back(std::move(p));
  }
  return out;
}

bool pl_selected(double confidence, double eta) { return confidence >= eta; }

PseudoLabel polar_pseudo_label(double score) {
  const double pb = score_probability(score);
  return score > 0.0 ? PseudoLabel{pb, Sign::kPositive} : PseudoLabel{1.0 - pb, Sign::kNegative};
}

std::vector<std::optional<Sign>> select_polar_pseudo_labels(const Mlp& model, std::span<const PolarSample> pool,
                                                             double eta) {
  std::vector<std::optional<Sign>> out(pool.size());
  if (pool.empty()) return out;
  const Matrix scores = model.predict(polar_inputs(pool));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PseudoLabel pl = polar_pseudo_label(scores(static_cast<Eigen::Index>(i), 0));
    if (pl_selected(pl.confidence, eta)) out[i] = pl.label;
  }
  return out;
}

std::vector<std::optional<int>> select_image_pseudo_labels(const Mlp& model, std::span<const ToyImage> pool, int k,
                                                           double eta, double temperature) {
  std::vector<std::optional<int>> out(pool.size());
  if (pool.empty()) return out;
  const Matrix probs = softmax_rows(model.predict(image_inputs(pool)), temperature);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    Eigen::Index best = 0;
    const double conf = probs.row(static_cast<Eigen::Index>(i)).head(k).maxCoeff(&best);
    if (pl_selected(conf, eta)) out[i] = static_cast<int>(best);
  }
  return out;
}

// -- Public strategies -------------------------------------------------------------------

TrainResult train_supervised(Mlp model, const PolarTask& task, const TrainConfig& config) {
  return train_polar(std::move(model), task, config, PolarUnsup::kNone);
}

TrainResult train_supervised(Mlp model, const ImageTask& task, const TrainConfig& config) {
  return train_image(std::move(model), task, config, {ImageUnsup::kNone});
}

TrainResult train_pl(Mlp model, const PolarTask& task, const TrainConfig& config) {
  return train_polar(std::move(model), task, config, PolarUnsup::kPseudoLabel);
}

TrainResult train_pl(Mlp model, const ImageTask& task, const TrainConfig& config) {
  return train_image(std::move(model), task, config, {ImageUnsup::kPseudoLabel});
}

TrainResult train_dact(Mlp model, const PolarTask& task, const TrainConfig& config) {
  return train_polar(std::move(model), task, config, PolarUnsup::kConsistency);
}

TrainResult train_dact(Mlp model, const ImageTask& task, const TrainConfig& config, DactImageOptions options) {
  return train_image(std::move(model), task, config,
                     {ImageUnsup::kConsistency, options.bank_targets, options.labeled_partner_consistency});
}

TrainResult train_bgdact(Mlp model, const ImageTask& task, const TrainConfig& config) {
  return train_image(std::move(model), task, config, {ImageUnsup::kBridged, true, false});
}

}  // namespace ossl
