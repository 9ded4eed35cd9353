#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ossl {

using PointSet = std::vector<std::vector<double>>;

/// RBF kernel k(x, y) = exp(-|x - y|^2 / (2 sigma^2)). Without a fixed
/// bandwidth, sigma is the median pairwise distance over X u Y.
struct KernelSpec {
  std::optional<double> fixed_bandwidth;

  static KernelSpec fixed(double sigma) { return KernelSpec{sigma}; }
  static KernelSpec median_heuristic() { return KernelSpec{}; }
};

/// Point count above which the median heuristic runs on a strided subsample.
inline constexpr std::size_t kMedianSubsampleCap = 2048;

/// Median pairwise Euclidean distance over X u Y (1.0 when every pair coincides).
double median_bandwidth(const PointSet& x, const PointSet& y);

/// Resolves the RBF bandwidth for the sets; validates fixed values.
double resolve_bandwidth(const KernelSpec& kernel, const PointSet& x, const PointSet& y);

/// Biased (V-statistic) squared MMD with an explicit bandwidth.
double mmd2_with_bandwidth(const PointSet& x, const PointSet& y, double sigma);
double mmd2(const PointSet& x, const PointSet& y, const KernelSpec& kernel);

/// Assigns each vector to argmax of its first k entries, ties to the lowest index.
std::vector<std::vector<std::size_t>> pseudo_partition(const PointSet& probs, int k);

struct GapReport {
  double marginal_mmd2 = 0.0;
  std::vector<double> classwise_mmd2;
  std::vector<int> skipped_classes;
  double mmd_gap = 0.0;
  double bandwidth_used = 0.0;
  // Metadata.
  std::string kernel = "rbf";
  std::string bandwidth_mode;  // "fixed" or "median_heuristic"
  std::string estimator = "biased_v_statistic";
  std::string probability_space = "full";

  [[nodiscard]] double recomputed_gap() const;
  bool operator==(const GapReport&) const = default;
};

/// Marginal MMD^2 plus the class-wise MMD^2 between labeled class c and the
/// unlabeled vectors pseudo-labeled c. One bandwidth, resolved on the
/// marginal sets, serves every term. Classes with an empty side are skipped.
GapReport mmd_gap(const PointSet& probs_labeled, std::span<const int> labels, const PointSet& probs_unlabeled, int k,
                  const KernelSpec& kernel);

}  // namespace ossl
