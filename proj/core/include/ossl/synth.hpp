#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ossl/rng.hpp"

namespace ossl {

// -- 2D polar data ----------------------------------------------------------

enum class PolarClass { kA = 0, kB = 1 };

enum class Origin { kLabeledId, kUnlabeledId, kOodDistant, kOodClose, kStyleTransferred };

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view name);

struct PolarSample {
  double r = 0.0;
  double theta = 0.0;
  std::optional<PolarClass> label;
  Origin origin = Origin::kUnlabeledId;

  [[nodiscard]] double x() const;
  [[nodiscard]] double y() const;
  bool operator==(const PolarSample&) const = default;
};

/// Open rectangle in (r, theta).
struct RegionSpec {
  double r_min = 0.0;
  double r_max = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;

  [[nodiscard]] bool contains(double r, double theta) const;
  [[nodiscard]] bool valid() const;

  static RegionSpec class_a();      // 0 < r < 1, pi/2 < theta < 3pi/2
  static RegionSpec class_b();      // 1 < r < 2, pi/2 < theta < 3pi/2
  static RegionSpec ood_distant();  // 2 < r < 3, -pi/2 < theta < 0
  static RegionSpec ood_close();    // 2 < r < 3, pi/2 < theta < 3pi/2
};

/// n samples uniform in (r, theta) over the open rectangle. Deterministic in seed.
std::vector<PolarSample> sample_region(const RegionSpec& spec, std::size_t n, std::uint64_t seed,
                                       std::optional<PolarClass> label, Origin origin);

/// Angle-perturbation augmentation: `count` copies with theta + U[-theta_max, theta_max].
std::vector<PolarSample> augment_angle(const PolarSample& x, double theta_max, int count, Rng& rng);
std::vector<PolarSample> augment_angle(const PolarSample& x, double theta_max, int count, std::uint64_t seed);

/// Balanced labeled set drawn from the class A and class B regions.
std::vector<PolarSample> sample_id_pair(std::size_t n_per_class, std::uint64_t seed, Origin origin);

// -- Toy images ---------------------------------------------------------------

struct ImageDims {
  int channels = 3;
  int height = 8;
  int width = 8;

  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  bool operator==(const ImageDims&) const = default;
};

/// Planar (channel-major, then row-major) pixel grid with values in [0, 1].
struct ToyImage {
  ImageDims dims;
  std::vector<double> pixels;
  std::optional<int> label;

  ToyImage() = default;
  explicit ToyImage(ImageDims d, double fill = 0.0) : dims(d), pixels(d.size(), fill) {}

  [[nodiscard]] std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * dims.height + y) * dims.width + x;
  }
  double& at(int c, int y, int x) { return pixels[index(c, y, x)]; }
  [[nodiscard]] double at(int c, int y, int x) const { return pixels[index(c, y, x)]; }
  bool operator==(const ToyImage&) const = default;
};

enum class NoiseKind { kGaussian, kUniform };

inline constexpr double kGaussianNoiseMean = 0.5;
inline constexpr double kGaussianNoiseStd = 0.25;

/// Unlabeled noise images: Gaussian N(0.5, 0.25^2) clamped to [0,1], or U[0,1].
std::vector<ToyImage> gen_noise_images(NoiseKind kind, std::size_t n, ImageDims dims, std::uint64_t seed);

/// Class c: a class-specific base colour plus an oriented stripe pattern,
/// with uniform +-0.1 pixel jitter. Labels are interleaved 0,1,..,k-1,0,...
std::vector<ToyImage> gen_toy_id_images(int k_classes, std::size_t n_per_class, std::uint64_t seed,
                                        ImageDims dims = {});

}  // namespace ossl
