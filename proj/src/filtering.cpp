#include "latopt/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latopt {

namespace {
constexpr double kEta = 0.5;
}

FilterKernel build_filter(int nx, int ny, double rmin) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("build_filter: dimensions must be positive");
  if (!(rmin > 0.0)) throw std::invalid_argument("build_filter: rmin must be positive");
  FilterKernel k;
  k.nx = nx;
  k.ny = ny;
  k.rmin = rmin;
  k.row_ptr.reserve(static_cast<std::size_t>(nx) * ny + 1);
  k.row_ptr.push_back(0);
  const int reach = static_cast<int>(std::ceil(rmin)) - 1;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double wsum = 0.0;
      const std::size_t begin = k.w.size();
      for (int jy = std::max(0, iy - reach); jy <= std::min(ny - 1, iy + reach); ++jy) {
        for (int jx = std::max(0, ix - reach); jx <= std::min(nx - 1, ix + reach); ++jx) {
          const double dx = ix - jx;
          const double dy = iy - jy;
          const double wt = rmin - std::sqrt(dx * dx + dy * dy);
          if (wt <= 0.0) continue;
          k.col.push_back(jy * nx + jx);
          k.w.push_back(wt);
          wsum += wt;
        }
      }
      for (std::size_t i = begin; i < k.w.size(); ++i) k.w[i] /= wsum;
      k.row_ptr.push_back(static_cast<int>(k.w.size()));
    }
  }
  return k;
}

Grid2D density_filter(const FilterKernel& k, const Grid2D& rho) {
  if (rho.nx != k.nx || rho.ny != k.ny)
    throw std::invalid_argument("density_filter: grid does not match kernel");
  Grid2D out(k.nx, k.ny);
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p)
      acc += k.w[p] * rho.v[k.col[p]];
    out.v[i] = acc;
  }
  return out;
}

std::vector<double> filter_backward(const FilterKernel& k,
                                    const std::vector<double>& cot_out) {
  const std::size_t n = static_cast<std::size_t>(k.nx) * k.ny;
  if (cot_out.size() != n)
    throw std::invalid_argument("filter_backward: cotangent size mismatch");
  std::vector<double> cot_in(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cot_out[i];
    for (int p = k.row_ptr[i]; p < k.row_ptr[i + 1]; ++p)
      cot_in[k.col[p]] += k.w[p] * c;
  }
  return cot_in;
}

Grid2D heaviside_project(const Grid2D& rho_tilde, double beta_h) {
  if (!(beta_h > 0.0))
    throw std::invalid_argument("heaviside_project: beta must be positive");
  Grid2D out(rho_tilde.nx, rho_tilde.ny);
  const double denom = std::tanh(beta_h * kEta) + std::tanh(beta_h * (1.0 - kEta));
  const double t0 = std::tanh(beta_h * kEta);
  for (std::size_t i = 0; i < rho_tilde.v.size(); ++i)
    out.v[i] = (t0 + std::tanh(beta_h * (rho_tilde.v[i] - kEta))) / denom;
  return out;
}

double heaviside_beta_at(int t) {
  if (t < 0) throw std::out_of_range("heaviside_beta_at: negative iteration");
  const int doublings = t / 50;
  double b = 1.0;
  for (int i = 0; i < doublings && b < 64.0; ++i) b *= 2.0;
  return std::min(b, 64.0);
}

std::vector<double> filter_chain_backward(const FilterKernel& k,
                                          const Grid2D& rho_tilde, double beta_h,
                                          const std::vector<double>& cot_bar) {
  if (cot_bar.size() != rho_tilde.v.size())
    throw std::invalid_argument("filter_chain_backward: cotangent size mismatch");
  const double denom = std::tanh(beta_h * kEta) + std::tanh(beta_h * (1.0 - kEta));
  std::vector<double> tmp(cot_bar.size());
  for (std::size_t i = 0; i < cot_bar.size(); ++i) {
    const double th = std::tanh(beta_h * (rho_tilde.v[i] - kEta));
    tmp[i] = cot_bar[i] * beta_h * (1.0 - th * th) / denom;
  }
  return filter_backward(k, tmp);
}

}  // namespace latopt
