#pragma once

#include <vector>

#include "latopt/grid.hpp"

namespace latopt {

// Linear density filter with a truncated cone kernel of radius rmin over
// cell centers, row-normalized so each output is a convex combination of
// its neighborhood (constant fields pass through unchanged). Stored sparse,
// one row per cell.
struct FilterKernel {
  int nx = 0;
  int ny = 0;
  double rmin = 0.0;
  std::vector<int> row_ptr;   // size nx*ny + 1
  std::vector<int> col;
  std::vector<double> w;
};

FilterKernel build_filter(int nx, int ny, double rmin);

Grid2D density_filter(const FilterKernel& k, const Grid2D& rho);

// Adjoint of the linear filter: cot_in = W^T cot_out.
std::vector<double> filter_backward(const FilterKernel& k,
                                    const std::vector<double>& cot_out);

// Smooth Heaviside projection about eta = 1/2:
// (tanh(bh*eta) + tanh(bh*(x-eta))) / (tanh(bh*eta) + tanh(bh*(1-eta))).
Grid2D heaviside_project(const Grid2D& rho_tilde, double beta_h);

// Projection sharpness at iteration t: starts at 1, doubles every 50
// iterations, capped at 64.
double heaviside_beta_at(int t);

// Pulls d(loss)/d(projected field) back through projection and filter.
std::vector<double> filter_chain_backward(const FilterKernel& k,
                                          const Grid2D& rho_tilde, double beta_h,
                                          const std::vector<double>& cot_bar);

}  // namespace latopt
