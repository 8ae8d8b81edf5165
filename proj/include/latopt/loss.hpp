#pragma once

#include "latopt/grid.hpp"

namespace latopt {

// Penalty coefficient endpoints and the continuation span T. All ramps are
// piecewise linear in the iteration index.
struct ScheduleConfig {
  int T = 200;
  double lam_vf_min = 1.0;
  double lam_vf_max = 50.0;    // reached after the first quarter, then held
  double lam_bin_max = 5.0;    // off until 3/4 through, then ramped in
  double lam_tv_max = 0.015;
  double lam_h1_start = 0.05;
  double lam_h1_end = 0.005;
  double beta_start = 1.0;
  double beta_end = 10.0;
  double lam_sym_max = 0.0;    // stays 0 unless symmetry is requested
};

struct ScheduleState {
  double lam_vf = 0.0;
  double lam_bin = 0.0;
  double lam_tv = 0.0;
  double lam_h1 = 0.0;
  double beta = 0.0;
  double lam_sym = 0.0;
};

// Coefficients at iteration t, 0 <= t < T (throws std::out_of_range).
ScheduleState schedule_at(const ScheduleConfig& cfg, int t);

// Each penalty returns its lam-scaled value and, when grad is non-null,
// accumulates the lam-scaled gradient into it (cells must match rho).

// lam * (mean(rho) - vstar)^2
double volume_penalty(const Grid2D& rho, double vstar, double lam, Grid2D* grad);

// lam * sum rho (1 - rho) * cell_area; drives cells away from 1/2.
double binarization_penalty(const Grid2D& rho, double lam, Grid2D* grad);

// Anisotropic total variation with forward differences. The value uses the
// exact absolute value; the gradient smooths it as d/sqrt(d^2 + eps^2) with
// eps = 1e-8 so it stays defined across zero differences.
double tv_penalty(const Grid2D& rho, double lam, Grid2D* grad);

// lam * sum of squared forward differences in both directions.
double h1_penalty(const Grid2D& rho, double lam, Grid2D* grad);

// lam * sum over all cells of (rho - mirror(rho))^2, mirroring the vertical
// index. Each mismatched pair is counted from both sides, so the gradient
// carries a factor 4.
double symmetry_penalty(const Grid2D& rho, double lam, Grid2D* grad);

struct LossTerms {
  double c_norm = 0.0;
  double vol = 0.0;
  double bin = 0.0;
  double tv = 0.0;
  double h1 = 0.0;
  double sym = 0.0;
  double total = 0.0;
};

// Assembles the scalar objective at one iteration: compliance normalized by
// the frozen C0 plus the scheduled penalties, all evaluated on the physical
// field rho. When grad is non-null the penalty gradients are accumulated
// into it; the compliance chain (1/C0 * dC/drho) is the caller's part since
// it needs the displacement field. with_regularizers=false drops the
// binarization, TV, and smoothness terms (the filtered comparison mode).
LossTerms total_loss(double compliance, double C0, const Grid2D& rho,
                     const ScheduleState& s, double vstar,
                     bool with_regularizers, Grid2D* grad);

}  // namespace latopt
