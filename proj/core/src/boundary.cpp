#include "ossl/boundary.hpp"

#include "ossl/errors.hpp"

namespace ossl {

double BoundarySnapshot::coordinate(int i) const {
  const double cell = 2.0 * extent / resolution;
  return -extent + (i + 0.5) * cell;
}

BoundarySnapshot eval_boundary(const std::function<int(double, double)>& classifier, int resolution) {
  if (resolution < 1) throw ParameterError("eval_boundary: resolution must be >= 1");
  BoundarySnapshot snap;
  snap.resolution = resolution;
  snap.predictions.resize(static_cast<std::size_t>(resolution) * resolution);
  for (int iy = 0; iy < resolution; ++iy) {
    const double y = snap.coordinate(iy);
    for (int ix = 0; ix < resolution; ++ix) {
      snap.predictions[static_cast<std::size_t>(iy) * resolution + ix] = classifier(snap.coordinate(ix), y);
    }
  }
  return snap;
}

BoundarySnapshot eval_boundary(const Mlp& model, int resolution) {
  if (model.input_dim() != 2) throw UsageError("eval_boundary: model must take 2D inputs");
  if (resolution < 1) throw ParameterError("eval_boundary: resolution must be >= 1");
  BoundarySnapshot snap;
  snap.resolution = resolution;
  const auto n = static_cast<Eigen::Index>(resolution) * resolution;
  Matrix grid(n, 2);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const Eigen::Index row = static_cast<Eigen::Index>(iy) * resolution + ix;
      grid(row, 0) = snap.coordinate(ix);
      grid(row, 1) = snap.coordinate(iy);
    }
  }
  const Matrix logits = model.predict(grid);
  snap.predictions.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    int cls = 0;
    if (logits.cols() == 1) {
      cls = logits(i, 0) > 0.0 ? 1 : 0;
    } else {
      logits.row(i).maxCoeff(&cls);
    }
    snap.predictions[static_cast<std::size_t>(i)] = cls;
  }
  return snap;
}

std::vector<std::array<double, 4>> boundary_segments(const BoundarySnapshot& s) {
  std::vector<std::array<double, 4>> segs;
  const double cell = 2.0 * s.extent / s.resolution;
  const double half = cell / 2.0;
  for (int iy = 0; iy < s.resolution; ++iy) {
    for (int ix = 0; ix < s.resolution; ++ix) {
      const int c = s.at(ix, iy);
      const double cx = s.coordinate(ix);
      const double cy = s.coordinate(iy);
      if (ix + 1 < s.resolution && s.at(ix + 1, iy) != c) {
        segs.push_back({cx + half, cy - half, cx + half, cy + half});
      }
      if (iy + 1 < s.resolution && s.at(ix, iy + 1) != c) {
        segs.push_back({cx - half, cy + half, cx + half, cy + half});
      }
    }
  }
  return segs;
}

}  // namespace ossl
