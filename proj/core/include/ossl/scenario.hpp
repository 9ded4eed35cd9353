#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ossl/config.hpp"
#include "ossl/gap.hpp"
#include "ossl/strategies.hpp"

namespace ossl {

enum class Mode { kPolar2d, kToyImage };
enum class UnlabeledSource { kId, kOodDistant, kOodClose, kOodPlusStyleTransfer, kNoiseGaussian, kNoiseUniform, kMixed };
enum class Strategy { kSupervised, kPl, kDact, kBgdact };

std::string_view to_string(Mode v);
std::string_view to_string(UnlabeledSource v);
std::string_view to_string(Strategy v);
Mode mode_from_string(std::string_view s);
UnlabeledSource source_from_string(std::string_view s);
Strategy strategy_from_string(std::string_view s);

/// Dataset sizes for both modes.
struct DataSpec {
  std::size_t n_labeled = 1000;
  std::size_t n_unlabeled = 10000;
  std::size_t n_test = 2000;
  /// Size of the style-mixed set added by ood_plus_styletransfer.
  std::size_t n_style_transferred = 10000;

  int k_classes = 2;
  std::size_t image_labeled_per_class = 20;
  std::size_t image_unlabeled_id_per_class = 100;
  std::size_t image_ood = 200;
  std::size_t image_test_per_class = 200;

  int boundary_resolution = 200;

  bool operator==(const DataSpec&) const = default;
};

struct ScenarioSpec {
  std::string name;
  Mode mode = Mode::kPolar2d;
  UnlabeledSource unlabeled_source = UnlabeledSource::kId;
  Strategy strategy = Strategy::kSupervised;
  TrainConfig config;
  DataSpec data;
  DactImageOptions dact_options;
  std::vector<std::uint64_t> replicate_seeds{0};

  bool operator==(const ScenarioSpec&) const;
};

/// Mode-appropriate defaults: the 2D protocol for polar2d, a desk-scale
/// schedule for toy_image.
ScenarioSpec default_scenario(Mode mode);

/// bgdact needs toy_image; ood_distant/ood_close/ood_plus_styletransfer need
/// polar2d; noise sources need toy_image. Throws ConfigError.
void validate(const ScenarioSpec& spec);

/// Flat `key = value` text, one scenario per file; `#` starts a comment.
ScenarioSpec parse_scenario(std::string_view text);
ScenarioSpec load_scenario_file(const std::filesystem::path& path);
std::string format_scenario(const ScenarioSpec& spec);

/// Parses "1,2,3" into seeds.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

// -- Task construction --------------------------------------------------------

PolarTask make_polar_task(const ScenarioSpec& spec, std::uint64_t seed);
ImageTask make_image_task(const ScenarioSpec& spec, std::uint64_t seed);
/// Style-mixed points built from random (ID, OOD) pairs with omega drawn from range.
std::vector<PolarSample> make_style_mixed(std::span<const PolarSample> id_pool, std::span<const PolarSample> ood_pool,
                                          std::size_t n, Interval omega_range, std::uint64_t seed);

Mlp initial_model(const ScenarioSpec& spec, std::uint64_t seed);

TrainResult train_polar(const ScenarioSpec& spec, const PolarTask& task, std::uint64_t seed);
TrainResult train_image(const ScenarioSpec& spec, const ImageTask& task, std::uint64_t seed);

/// Gap between labeled and unlabeled predictions of a model on a task.
GapReport polar_gap(const Mlp& model, const PolarTask& task, const KernelSpec& kernel = KernelSpec::median_heuristic());
GapReport image_gap(const Mlp& model, const ImageTask& task, double temperature,
                    const KernelSpec& kernel = KernelSpec::median_heuristic());

// -- Run records ----------------------------------------------------------------

struct ModelSnapshot {
  int input_dim = 0;
  int hidden_dim = 0;
  int output_dim = 0;
  Activation activation = Activation::kRelu;
  std::vector<double> parameters;

  static ModelSnapshot of(const Mlp& model);
  [[nodiscard]] Mlp restore() const;
  bool operator==(const ModelSnapshot&) const = default;
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "aborted"
  std::string diagnostic;
  std::vector<EpochMetrics> metrics;
  std::optional<double> final_accuracy;
  /// Gap under a model trained on the labeled set only.
  std::optional<GapReport> gap_supervised_reference;
  /// Gap under the final model of this run.
  std::optional<GapReport> gap_final;
  std::optional<ModelSnapshot> model;

  bool operator==(const SeedRun&) const = default;
};

struct RunRecord {
  ScenarioSpec scenario;
  std::vector<SeedRun> runs;
  std::vector<std::string> artifact_paths;

  [[nodiscard]] std::vector<double> final_accuracies() const;
  bool operator==(const RunRecord&) const = default;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  bool compute_gaps = true;
  bool write_figures = true;
  bool export_datasets = false;
};

/// Trains every replicate seed of a validated scenario. Non-finite losses
/// abort that seed only and are recorded with a diagnostic.
RunRecord run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(std::string_view json);
void save_record(const RunRecord& record, const std::filesystem::path& path);
RunRecord load_record(const std::filesystem::path& path);

std::string gap_report_to_json(const GapReport& report);

/// Header: epoch,sup,unsup,st,total,acc,ood_split,mmd_gap
void write_metrics_csv(const std::filesystem::path& path, std::span<const EpochMetrics> metrics);
std::vector<EpochMetrics> read_metrics_csv(const std::filesystem::path& path);

}  // namespace ossl
