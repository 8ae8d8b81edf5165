#include "latopt/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace latopt {

namespace {

constexpr double kTvEps = 1e-8;
constexpr double kCellArea = 1.0;  // unit cells by construction

// Linear ramp from v0 at t0 to v1 at t1, clamped outside.
double ramp(double t, double t0, double t1, double v0, double v1) {
  if (t <= t0 || t1 <= t0) return v0;
  if (t >= t1) return v1;
  return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

void check_grad_shape(const Grid2D& rho, Grid2D* grad, const char* who) {
  if (grad && (grad->nx != rho.nx || grad->ny != rho.ny))
    throw std::invalid_argument(std::string(who) + ": gradient grid shape mismatch");
}

}  // namespace

ScheduleState schedule_at(const ScheduleConfig& cfg, int t) {
  if (cfg.T < 1) throw std::invalid_argument("schedule_at: T must be positive");
  if (t < 0 || t >= cfg.T)
    throw std::out_of_range("schedule_at: iteration outside [0, T)");
  const double last = cfg.T - 1;
  ScheduleState s;
  s.lam_vf = ramp(t, 0.0, 0.25 * cfg.T, cfg.lam_vf_min, cfg.lam_vf_max);
  s.lam_bin = ramp(t, 0.75 * cfg.T, last, 0.0, cfg.lam_bin_max);
  s.lam_tv = ramp(t, 0.0, last, 0.0, cfg.lam_tv_max);
  s.lam_h1 = ramp(t, 0.0, last, cfg.lam_h1_start, cfg.lam_h1_end);
  s.beta = ramp(t, 0.0, last, cfg.beta_start, cfg.beta_end);
  s.lam_sym = ramp(t, 0.0, last, 0.0, cfg.lam_sym_max);
  return s;
}

double volume_penalty(const Grid2D& rho, double vstar, double lam, Grid2D* grad) {
  check_grad_shape(rho, grad, "volume_penalty");
  const double excess = rho.mean() - vstar;
  if (grad) {
    const double g = lam * 2.0 * excess / static_cast<double>(rho.size());
    for (double& x : grad->v) x += g;
  }
  return lam * excess * excess;
}

double binarization_penalty(const Grid2D& rho, double lam, Grid2D* grad) {
  check_grad_shape(rho, grad, "binarization_penalty");
  double acc = 0.0;
  for (std::size_t i = 0; i < rho.v.size(); ++i) {
    const double r = rho.v[i];
    acc += r * (1.0 - r);
    if (grad) grad->v[i] += lam * kCellArea * (1.0 - 2.0 * r);
  }
  return lam * kCellArea * acc;
}

double tv_penalty(const Grid2D& rho, double lam, Grid2D* grad) {
  check_grad_shape(rho, grad, "tv_penalty");
  double acc = 0.0;
  for (int iy = 0; iy < rho.ny; ++iy) {
    for (int ix = 0; ix + 1 < rho.nx; ++ix) {
      const double d = rho.at(ix + 1, iy) - rho.at(ix, iy);
      acc += std::fabs(d);
      if (grad) {
        const double g = lam * d / std::sqrt(d * d + kTvEps * kTvEps);
        grad->at(ix + 1, iy) += g;
        grad->at(ix, iy) -= g;
      }
    }
  }
  for (int iy = 0; iy + 1 < rho.ny; ++iy) {
    for (int ix = 0; ix < rho.nx; ++ix) {
      const double d = rho.at(ix, iy + 1) - rho.at(ix, iy);
      acc += std::fabs(d);
      if (grad) {
        const double g = lam * d / std::sqrt(d * d + kTvEps * kTvEps);
        grad->at(ix, iy + 1) += g;
        grad->at(ix, iy) -= g;
      }
    }
  }
  return lam * acc;
}

double h1_penalty(const Grid2D& rho, double lam, Grid2D* grad) {
  check_grad_shape(rho, grad, "h1_penalty");
  double acc = 0.0;
  for (int iy = 0; iy < rho.ny; ++iy) {
    for (int ix = 0; ix + 1 < rho.nx; ++ix) {
      const double d = rho.at(ix + 1, iy) - rho.at(ix, iy);
      acc += d * d;
      if (grad) {
        grad->at(ix + 1, iy) += lam * 2.0 * d;
        grad->at(ix, iy) -= lam * 2.0 * d;
      }
    }
  }
  for (int iy = 0; iy + 1 < rho.ny; ++iy) {
    for (int ix = 0; ix < rho.nx; ++ix) {
      const double d = rho.at(ix, iy + 1) - rho.at(ix, iy);
      acc += d * d;
      if (grad) {
        grad->at(ix, iy + 1) += lam * 2.0 * d;
        grad->at(ix, iy) -= lam * 2.0 * d;
      }
    }
  }
  return lam * acc;
}

double symmetry_penalty(const Grid2D& rho, double lam, Grid2D* grad) {
  check_grad_shape(rho, grad, "symmetry_penalty");
  double acc = 0.0;
  for (int iy = 0; iy < rho.ny; ++iy) {
    for (int ix = 0; ix < rho.nx; ++ix) {
      const double d = rho.at(ix, iy) - rho.at(ix, rho.ny - 1 - iy);
      acc += d * d;
      if (grad) grad->at(ix, iy) += lam * 4.0 * d;
    }
  }
  return lam * acc;
}

LossTerms total_loss(double compliance, double C0, const Grid2D& rho,
                     const ScheduleState& s, double vstar,
                     bool with_regularizers, Grid2D* grad) {
  if (!(C0 > 0.0)) throw std::invalid_argument("total_loss: C0 must be positive");
  LossTerms t;
  t.c_norm = compliance / C0;
  t.vol = volume_penalty(rho, vstar, s.lam_vf, grad);
  if (with_regularizers) {
    t.bin = binarization_penalty(rho, s.lam_bin, grad);
    t.tv = tv_penalty(rho, s.lam_tv, grad);
    t.h1 = h1_penalty(rho, s.lam_h1, grad);
  }
  if (s.lam_sym != 0.0) t.sym = symmetry_penalty(rho, s.lam_sym, grad);
  t.total = t.c_norm + t.vol + t.bin + t.tv + t.h1 + t.sym;
  return t;
}

}  // namespace latopt
