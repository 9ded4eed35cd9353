#include "ossl/rng.hpp"

#include <vector>

namespace ossl {

Rng make_rng(std::uint64_t seed, Stream stream, std::initializer_list<std::uint64_t> coords) {
  std::vector<std::uint32_t> words;
  words.reserve(3 + 2 * coords.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  words.push_back(static_cast<std::uint32_t>(stream));
  for (std::uint64_t c : coords) {
    words.push_back(static_cast<std::uint32_t>(c));
    words.push_back(static_cast<std::uint32_t>(c >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  if (lo == hi) {
    return lo;
  }
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

}  // namespace ossl
