#include "ossl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

constexpr double kPi = std::numbers::pi;

// Strictly inside (lo, hi).
double open_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(std::nextafter(lo, hi), hi);
  return dist(rng);
}

constexpr double kJitter = 0.1;
constexpr double kPatternAmplitude = 0.12;

}  // namespace

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::kLabeledId: return "labeled_id";
    case Origin::kUnlabeledId: return "unlabeled_id";
    case Origin::kOodDistant: return "ood_distant";
    case Origin::kOodClose: return "ood_close";
    case Origin::kStyleTransferred: return "style_transferred";
  }
  return "unknown";
}

Origin origin_from_string(std::string_view name) {
  for (Origin o : {Origin::kLabeledId, Origin::kUnlabeledId, Origin::kOodDistant, Origin::kOodClose,
                   Origin::kStyleTransferred}) {
    if (to_string(o) == name) {
      return o;
    }
  }
  throw ParameterError("unknown sample origin '" + std::string(name) + "'");
}

double PolarSample::x() const { return r * std::cos(theta); }
double PolarSample::y() const { return r * std::sin(theta); }

bool RegionSpec::contains(double r, double theta) const {
  return r > r_min && r < r_max && theta > theta_min && theta < theta_max;
}

bool RegionSpec::valid() const {
  return std::isfinite(r_min) && std::isfinite(r_max) && std::isfinite(theta_min) && std::isfinite(theta_max) &&
         r_min >= 0.0 && r_min < r_max && theta_min < theta_max;
}

RegionSpec RegionSpec::class_a() { return {0.0, 1.0, kPi / 2.0, 3.0 * kPi / 2.0}; }
RegionSpec RegionSpec::class_b() { return {1.0, 2.0, kPi / 2.0, 3.0 * kPi / 2.0}; }
RegionSpec RegionSpec::ood_distant() { return {2.0, 3.0, -kPi / 2.0, 0.0}; }
RegionSpec RegionSpec::ood_close() { return {2.0, 3.0, kPi / 2.0, 3.0 * kPi / 2.0}; }

std::vector<PolarSample> sample_region(const RegionSpec& spec, std::size_t n, std::uint64_t seed,
                                       std::optional<PolarClass> label, Origin origin) {
  if (!spec.valid()) {
    throw ParameterError("sample_region: region needs 0 <= r_min < r_max and theta_min < theta_max");
  }
  Rng rng = make_rng(seed, Stream::kData);
  std::vector<PolarSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PolarSample s;
    s.r = open_uniform(rng, spec.r_min, spec.r_max);
    s.theta = open_uniform(rng, spec.theta_min, spec.theta_max);
    s.label = label;
    s.origin = origin;
    out.push_back(s);
  }
  return out;
}

std::vector<PolarSample> augment_angle(const PolarSample& x, double theta_max, int count, Rng& rng) {
  if (!(theta_max > 0.0) || count < 1) {
    throw ParameterError("augment_angle: needs theta_max > 0 and count >= 1");
  }
  std::uniform_real_distribution<double> delta(-theta_max, theta_max);
  std::vector<PolarSample> out(static_cast<std::size_t>(count), x);
  for (auto& s : out) {
    s.theta = x.theta + delta(rng);
  }
  return out;
}

std::vector<PolarSample> augment_angle(const PolarSample& x, double theta_max, int count, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kAugment);
  return augment_angle(x, theta_max, count, rng);
}

std::vector<PolarSample> sample_id_pair(std::size_t n_per_class, std::uint64_t seed, Origin origin) {
  auto a = sample_region(RegionSpec::class_a(), n_per_class, seed * 2 + 0, PolarClass::kA, origin);
  auto b = sample_region(RegionSpec::class_b(), n_per_class, seed * 2 + 1, PolarClass::kB, origin);
  std::vector<PolarSample> out;
  out.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < n_per_class; ++i) {
    out.push_back(a[i]);
    out.push_back(b[i]);
  }
  return out;
}

std::vector<ToyImage> gen_noise_images(NoiseKind kind, std::size_t n, ImageDims dims, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kData, {static_cast<std::uint64_t>(kind) + 100});
  std::normal_distribution<double> gauss(kGaussianNoiseMean, kGaussianNoiseStd);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ToyImage> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ToyImage img(dims);
    for (double& p : img.pixels) {
      p = kind == NoiseKind::kGaussian ? std::clamp(gauss(rng), 0.0, 1.0) : unif(rng);
    }
    out.push_back(std::move(img));
  }
  return out;
}

std::vector<ToyImage> gen_toy_id_images(int k_classes, std::size_t n_per_class, std::uint64_t seed, ImageDims dims) {
  if (k_classes < 2) {
    throw ParameterError("gen_toy_id_images: k_classes must be >= 2");
  }
  Rng rng = make_rng(seed, Stream::kData, {200});
  std::uniform_real_distribution<double> jitter(-kJitter, kJitter);
  std::vector<ToyImage> out;
  out.reserve(n_per_class * static_cast<std::size_t>(k_classes));
  for (std::size_t i = 0; i < n_per_class; ++i) {
    for (int c = 0; c < k_classes; ++c) {
      const double hue = 2.0 * kPi * c / k_classes;
      const double orientation = kPi * c / k_classes;
      ToyImage img(dims);
      img.label = c;
      for (int ch = 0; ch < dims.channels; ++ch) {
        const double base = 0.5 + 0.25 * std::cos(hue + 2.0 * kPi * ch / 3.0);
        for (int y = 0; y < dims.height; ++y) {
          for (int x = 0; x < dims.width; ++x) {
            const double phase = (x * std::cos(orientation) + y * std::sin(orientation)) * kPi / 2.0;
            const double stripe = std::cos(phase) >= 0.0 ? 1.0 : -1.0;
            img.at(ch, y, x) = std::clamp(base + kPatternAmplitude * stripe + jitter(rng), 0.0, 1.0);
          }
        }
      }
      out.push_back(std::move(img));
    }
  }
  return out;
}

}  // namespace ossl
