#pragma once

#include <vector>

#include "ossl/synth.hpp"

namespace ossl {

/// Low-dimensional style mixing: keeps the ID radius, interpolates the angle
/// toward the OOD sample. The result is unlabeled.
PolarSample style_mix_2d(const PolarSample& x_id, const PolarSample& x_ood, double omega);

struct ChannelStats {
  std::vector<double> mean;
  std::vector<double> std;  // population standard deviation
};

ChannelStats channel_stats(const ToyImage& img);

/// Pixel-space adaptive instance normalization: each content channel is
/// renormalized to the style channel's mean and std, then clamped to [0,1].
/// A flat content channel only has its mean moved to the style mean.
ToyImage adain_transfer(const ToyImage& content, const ToyImage& style);
/// Same operator without the final clamp.
ToyImage adain_transfer_unclamped(const ToyImage& content, const ToyImage& style);

/// beta * transferred + (1 - beta) * x_id, clamped to [0,1].
ToyImage interpolate_st(const ToyImage& transferred, const ToyImage& x_id, double beta);

}  // namespace ossl
