#pragma once

#include <cstdint>

#include "ossl/rng.hpp"
#include "ossl/synth.hpp"

namespace ossl {

/// Label-preserving image augmentation: horizontal flip with p = 0.5, a random
/// shift of up to one pixel per axis with edge replication, then one random
/// 2x2 block zeroed in every channel.
ToyImage image_aug(const ToyImage& img, Rng& rng);
ToyImage image_aug(const ToyImage& img, std::uint64_t seed);

}  // namespace ossl
