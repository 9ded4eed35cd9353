#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "ossl/gap.hpp"
#include "ossl/synth.hpp"

namespace ossl {

/// Columns r,theta,x,y,label,origin; label is A, B or empty.
void write_polar_csv(const std::filesystem::path& path, std::span<const PolarSample> samples);
std::vector<PolarSample> read_polar_csv(const std::filesystem::path& path);

/// Line 1 "c,h,w", line 2 the dims, line 3 a column header, then one image
/// per row: label (empty if unlabeled) followed by planar row-major pixels.
void write_image_csv(const std::filesystem::path& path, std::span<const ToyImage> images);
std::vector<ToyImage> read_image_csv(const std::filesystem::path& path);

struct ProbabilityTable {
  PointSet probs;
  std::vector<int> labels;  // empty for unlabeled files
};

/// Rows of probabilities; with `labeled`, the first column is a class index.
/// A non-numeric first line is treated as a header and skipped.
ProbabilityTable read_probability_csv(const std::filesystem::path& path, bool labeled);
void write_probability_csv(const std::filesystem::path& path, const PointSet& probs, std::span<const int> labels);

}  // namespace ossl
