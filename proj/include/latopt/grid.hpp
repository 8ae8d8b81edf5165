#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace latopt {

// Scalar field on a regular nx-by-ny grid of unit cells. Storage is
// y-major: flat index e = iy*nx + ix, with iy = 0 the bottom row of the
// domain. Cell (ix, iy) has its center at ((ix+0.5)/nx, (iy+0.5)/ny) in the
// unit square, and the same flat ordering is used for finite elements.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  std::vector<double> v;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double fill = 0.0) : nx(nx_), ny(ny_) {
    if (nx_ < 1 || ny_ < 1)
      throw std::invalid_argument("Grid2D: dimensions must be positive");
    v.assign(static_cast<std::size_t>(nx_) * ny_, fill);
  }

  std::size_t size() const { return v.size(); }
  double& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * nx + ix]; }
  double at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * nx + ix]; }

  double mean() const {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  }
};

}  // namespace latopt
