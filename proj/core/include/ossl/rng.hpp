#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ossl {

using Rng = std::mt19937_64;

/// Independent random streams keyed by purpose. Every consumer of randomness
/// in a training run derives its own generator from (run seed, stream, indices)
/// so that enabling or disabling one component never shifts the draws of
/// another.
enum class Stream : std::uint32_t {
  kInit = 1,
  kLabeledOrder,
  kUnlabeledOrder,
  kAugment,
  kPartner,
  kBeta,
  kOmega,
  kData,
  kTestData,
  kStylePairs,
};

/// Builds a generator from a base seed, a stream tag, and up to a few
/// integer coordinates (epoch, step, sample index, ...).
Rng make_rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> coords = {});

/// Uniform real in [lo, hi).
double uniform(Rng& rng, double lo, double hi);

}  // namespace ossl
