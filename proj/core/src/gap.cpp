#include "ossl/gap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

void require_nonempty_same_dim(const PointSet& x, const PointSet& y) {
  if (x.empty() || y.empty()) {
    throw ParameterError("mmd2: both sample sets must be nonempty");
  }
  const std::size_t d = x.front().size();
  auto same = [d](const std::vector<double>& v) { return v.size() == d; };
  if (!std::all_of(x.begin(), x.end(), same) || !std::all_of(y.begin(), y.end(), same)) {
    throw InputShapeError("mmd2: all vectors must have the same length");
  }
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Sum of k(a_i, a_j) over all ordered pairs, using symmetry: n diagonal terms
// (k(a, a) = 1) plus twice the strict upper triangle.
double self_kernel_sum(const PointSet& a, double gamma) {
  double upper = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      row += std::exp(-gamma * squared_distance(a[i], a[j]));
    }
    upper += row;
  }
  return static_cast<double>(a.size()) + 2.0 * upper;
}

double cross_kernel_sum(const PointSet& a, const PointSet& b, double gamma) {
  double total = 0.0;
  for (const auto& ai : a) {
    double row = 0.0;
    for (const auto& bj : b) {
      row += std::exp(-gamma * squared_distance(ai, bj));
    }
    total += row;
  }
  return total;
}

PointSet subset(const PointSet& all, const std::vector<std::size_t>& idx) {
  PointSet out;
  out.reserve(idx.size());
  for (std::size_t i : idx) {
    out.push_back(all[i]);
  }
  return out;
}

}  // namespace

double median_bandwidth(const PointSet& x, const PointSet& y) {
  const std::size_t total = x.size() + y.size();
  const std::size_t stride = total > kMedianSubsampleCap ? (total + kMedianSubsampleCap - 1) / kMedianSubsampleCap : 1;
  std::vector<const std::vector<double>*> pts;
  pts.reserve(total / stride + 1);
  for (std::size_t i = 0; i < total; i += stride) {
    pts.push_back(i < x.size() ? &x[i] : &y[i - x.size()]);
  }
  std::vector<double> dists;
  dists.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      dists.push_back(std::sqrt(squared_distance(*pts[i], *pts[j])));
    }
  }
  if (dists.empty()) {
    return 1.0;
  }
  // Lower median: deterministic and one selection pass.
  auto mid = dists.begin() + static_cast<std::ptrdiff_t>((dists.size() - 1) / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  return *mid > 0.0 ? *mid : 1.0;
}

double resolve_bandwidth(const KernelSpec& kernel, const PointSet& x, const PointSet& y) {
  if (kernel.fixed_bandwidth) {
    const double s = *kernel.fixed_bandwidth;
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ParameterError("rbf bandwidth must be positive and finite");
    }
    return s;
  }
  return median_bandwidth(x, y);
}

double mmd2_with_bandwidth(const PointSet& x, const PointSet& y, double sigma) {
  require_nonempty_same_dim(x, y);
  if (!(sigma > 0.0)) {
    throw ParameterError("rbf bandwidth must be positive");
  }
  const double gamma = 1.0 / (2.0 * sigma * sigma);
  const double m = static_cast<double>(x.size());
  const double n = static_cast<double>(y.size());
  const double kxx = self_kernel_sum(x, gamma) / (m * m);
  const double kyy = self_kernel_sum(y, gamma) / (n * n);
  const double kxy = cross_kernel_sum(x, y, gamma) / (m * n);
  return kxx + kyy - 2.0 * kxy;
}

double mmd2(const PointSet& x, const PointSet& y, const KernelSpec& kernel) {
  require_nonempty_same_dim(x, y);
  return mmd2_with_bandwidth(x, y, resolve_bandwidth(kernel, x, y));
}

std::vector<std::vector<std::size_t>> pseudo_partition(const PointSet& probs, int k) {
  if (k < 1) {
    throw ParameterError("pseudo_partition: k must be >= 1");
  }
  std::vector<std::vector<std::size_t>> parts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto& p = probs[i];
    if (p.size() < static_cast<std::size_t>(k)) {
      throw InputShapeError("pseudo_partition: vector shorter than k");
    }
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(best)]) {
        best = c;
      }
    }
    parts[static_cast<std::size_t>(best)].push_back(i);
  }
  return parts;
}

double GapReport::recomputed_gap() const {
  double s = marginal_mmd2;
  for (double v : classwise_mmd2) {
    s += v;
  }
  return s;
}

GapReport mmd_gap(const PointSet& probs_labeled, std::span<const int> labels, const PointSet& probs_unlabeled, int k,
                  const KernelSpec& kernel) {
  if (probs_labeled.empty() || probs_unlabeled.empty()) {
    throw ParameterError("mmd_gap: labeled and unlabeled prediction sets must be nonempty");
  }
  if (labels.size() != probs_labeled.size()) {
    throw InputShapeError("mmd_gap: one label per labeled prediction required");
  }
  if (k < 1) {
    throw ParameterError("mmd_gap: k must be >= 1");
  }
  GapReport report;
  report.bandwidth_mode = kernel.fixed_bandwidth ? "fixed" : "median_heuristic";
  report.bandwidth_used = resolve_bandwidth(kernel, probs_labeled, probs_unlabeled);
  report.marginal_mmd2 = mmd2_with_bandwidth(probs_labeled, probs_unlabeled, report.bandwidth_used);

  std::vector<std::vector<std::size_t>> labeled_parts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k) {
      throw ParameterError("mmd_gap: labeled class " + std::to_string(labels[i]) + " outside [0, k)");
    }
    labeled_parts[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  const auto unlabeled_parts = pseudo_partition(probs_unlabeled, k);

  report.classwise_mmd2.assign(static_cast<std::size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    const auto& li = labeled_parts[static_cast<std::size_t>(c)];
    const auto& ui = unlabeled_parts[static_cast<std::size_t>(c)];
    if (li.empty() || ui.empty()) {
      report.skipped_classes.push_back(c);
      continue;
    }
    report.classwise_mmd2[static_cast<std::size_t>(c)] =
        mmd2_with_bandwidth(subset(probs_labeled, li), subset(probs_unlabeled, ui), report.bandwidth_used);
  }
  report.mmd_gap = report.recomputed_gap();
  return report;
}

}  // namespace ossl
