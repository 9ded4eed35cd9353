#include "ossl/augment.hpp"

#include <algorithm>

namespace ossl {

ToyImage image_aug(const ToyImage& img, Rng& rng) {
  const int h = img.dims.height;
  const int w = img.dims.width;
  std::bernoulli_distribution flip_coin(0.5);
  std::uniform_int_distribution<int> shift(-1, 1);
  const bool flip = flip_coin(rng);
  const int dy = shift(rng);
  const int dx = shift(rng);
  std::uniform_int_distribution<int> mask_y(0, std::max(0, h - 2));
  std::uniform_int_distribution<int> mask_x(0, std::max(0, w - 2));
  const int my = mask_y(rng);
  const int mx = mask_x(rng);

  ToyImage out(img.dims);
  out.label = img.label;
  for (int c = 0; c < img.dims.channels; ++c) {
    for (int y = 0; y < h; ++y) {
      const int sy = std::clamp(y - dy, 0, h - 1);
      for (int x = 0; x < w; ++x) {
        int sx = std::clamp(x - dx, 0, w - 1);
        if (flip) {
          sx = w - 1 - sx;
        }
        out.at(c, y, x) = img.at(c, sy, sx);
      }
    }
    for (int y = my; y < std::min(h, my + 2); ++y) {
      for (int x = mx; x < std::min(w, mx + 2); ++x) {
        out.at(c, y, x) = 0.0;
      }
    }
  }
  return out;
}

ToyImage image_aug(const ToyImage& img, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kAugment);
  return image_aug(img, rng);
}

}  // namespace ossl
