#include "ossl/style.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ossl/errors.hpp"

namespace ossl {
namespace {

void require_same_dims(const ToyImage& a, const ToyImage& b, const char* op) {
  if (!(a.dims == b.dims) || a.pixels.size() != b.pixels.size()) {
    throw InputShapeError(std::string(op) + ": image dimensions differ");
  }
}

}  // namespace

PolarSample style_mix_2d(const PolarSample& x_id, const PolarSample& x_ood, double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw ParameterError("style_mix_2d: omega must be in [0,1]");
  }
  if (!x_id.label) {
    throw ParameterError("style_mix_2d: the ID sample must carry a label");
  }
  PolarSample out;
  out.r = x_id.r;
  out.theta = (1.0 - omega) * x_id.theta + omega * x_ood.theta;
  out.origin = Origin::kStyleTransferred;
  return out;
}

ChannelStats channel_stats(const ToyImage& img) {
  const std::size_t plane = static_cast<std::size_t>(img.dims.height) * img.dims.width;
  if (plane == 0 || img.dims.channels < 1 || img.pixels.size() != img.dims.size()) {
    throw InputShapeError("channel_stats: empty or inconsistent image");
  }
  ChannelStats s;
  s.mean.resize(static_cast<std::size_t>(img.dims.channels));
  s.std.resize(static_cast<std::size_t>(img.dims.channels));
  for (int c = 0; c < img.dims.channels; ++c) {
    const double* p = img.pixels.data() + static_cast<std::size_t>(c) * plane;
    // A constant channel must come out with std exactly 0; summation rounding
    // would otherwise leave ~1e-16 and AdaIN would divide by it.
    if (std::all_of(p, p + plane, [&](double v) { return v == p[0]; })) {
      s.mean[static_cast<std::size_t>(c)] = p[0];
      s.std[static_cast<std::size_t>(c)] = 0.0;
      continue;
    }
    double mean = 0.0;
    for (std::size_t i = 0; i < plane; ++i) mean += p[i];
    mean /= static_cast<double>(plane);
    double var = 0.0;
    for (std::size_t i = 0; i < plane; ++i) var += (p[i] - mean) * (p[i] - mean);
    var /= static_cast<double>(plane);
    s.mean[static_cast<std::size_t>(c)] = mean;
    s.std[static_cast<std::size_t>(c)] = std::sqrt(var);
  }
  return s;
}

ToyImage adain_transfer_unclamped(const ToyImage& content, const ToyImage& style) {
  require_same_dims(content, style, "adain_transfer");
  const ChannelStats cs = channel_stats(content);
  const ChannelStats ss = channel_stats(style);
  const std::size_t plane = static_cast<std::size_t>(content.dims.height) * content.dims.width;
  ToyImage out(content.dims);
  out.label = content.label;
  for (int c = 0; c < content.dims.channels; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    const double* src = content.pixels.data() + ci * plane;
    double* dst = out.pixels.data() + ci * plane;
    if (cs.std[ci] > 0.0) {
      const double scale = ss.std[ci] / cs.std[ci];
      for (std::size_t i = 0; i < plane; ++i) dst[i] = scale * (src[i] - cs.mean[ci]) + ss.mean[ci];
    } else {
      for (std::size_t i = 0; i < plane; ++i) dst[i] = src[i] - cs.mean[ci] + ss.mean[ci];
    }
  }
  return out;
}

ToyImage adain_transfer(const ToyImage& content, const ToyImage& style) {
  ToyImage out = adain_transfer_unclamped(content, style);
  for (double& p : out.pixels) p = std::clamp(p, 0.0, 1.0);
  return out;
}

ToyImage interpolate_st(const ToyImage& transferred, const ToyImage& x_id, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ParameterError("interpolate_st: beta must be in [0,1]");
  }
  require_same_dims(transferred, x_id, "interpolate_st");
  ToyImage out(x_id.dims);
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    out.pixels[i] = std::clamp(beta * transferred.pixels[i] + (1.0 - beta) * x_id.pixels[i], 0.0, 1.0);
  }
  return out;
}

}  // namespace ossl
