#pragma once

#include <filesystem>
#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ossl/nn.hpp"
#include "ossl/synth.hpp"

namespace ossl {

inline constexpr double kGridExtent = 3.2;

/// Class predictions at the cell centres of a resolution x resolution grid
/// over [-extent, extent]^2. Row j (y ascending) is stored after row j-1.
struct BoundarySnapshot {
  int resolution = 0;
  double extent = kGridExtent;
  std::vector<int> predictions;

  [[nodiscard]] double coordinate(int i) const;
  [[nodiscard]] int at(int ix, int iy) const { return predictions[static_cast<std::size_t>(iy) * resolution + ix]; }
  bool operator==(const BoundarySnapshot&) const = default;
};

/// Hinge heads predict class 1 when score > 0; softmax heads take argmax.
BoundarySnapshot eval_boundary(const Mlp& model, int resolution);
BoundarySnapshot eval_boundary(const std::function<int(double, double)>& classifier, int resolution);

/// Cell-edge segments separating differently classified neighbours, as
/// (x0, y0, x1, y1) in data coordinates.
std::vector<std::array<double, 4>> boundary_segments(const BoundarySnapshot& snapshot);

struct FigureOptions {
  int pixels = 640;
  std::size_t max_points_per_origin = 2000;
  std::string title;
};

std::string render_svg(const BoundarySnapshot& snapshot, std::span<const PolarSample> points,
                       const FigureOptions& options = {});
/// Throws IoError when the file cannot be written.
void emit_figure(const BoundarySnapshot& snapshot, std::span<const PolarSample> points,
                 const std::filesystem::path& path, const FigureOptions& options = {});

}  // namespace ossl
