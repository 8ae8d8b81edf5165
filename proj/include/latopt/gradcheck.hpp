#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latopt {

// Finite-difference verification of every hand-written gradient path. Each
// check compares an analytic gradient against central differences of the
// corresponding forward evaluation and reports the worst error.

// Random circuits (up to max_qubits/max_layers), random readout weights.
// Returns the largest absolute deviation between the shift-rule gradient
// and central differences with h = 1e-5.
double check_param_shift(int trials, int max_qubits, int max_layers,
                         std::uint64_t seed);

struct FemSensitivityCheck {
  double max_rel_err = 0.0;
  bool all_nonpositive = false;
};

// 4x2 tip cantilever with random densities in [0.2, 1].
FemSensitivityCheck check_fem_sensitivity(std::uint64_t seed);

// Affine projection backward vs central differences, small random layer.
double check_projection(std::uint64_t seed);

// Decoder (with sharpening) backward vs central differences on a small
// grid. stride subsamples the big weight matrices; 1 checks everything.
double check_decoder(std::uint64_t seed, int stride);

struct PenaltyCheckResult {
  double vol = 0.0;
  double bin = 0.0;
  double tv = 0.0;   // against differences of the eps-smoothed value
  double h1 = 0.0;
  double sym = 0.0;
  double worst() const;
};

// Absolute gradient errors on a deterministic well-separated field.
PenaltyCheckResult check_penalties(std::uint64_t seed);

// Filter + projection chain backward vs central differences.
double check_filter_chain(std::uint64_t seed);

struct EndToEndCheck {
  double theta_err = 0.0;    // worst scaled error over circuit angles
  double decoder_err = 0.0;  // worst scaled error over decoder parameters
};

// Full pipeline loss gradients on a 6x3 mesh with a 2-qubit circuit, at
// schedule position t = round(t_frac * T). Scaled error per component:
// |analytic - fd| / max(|fd|, 1e-3 * max_j |fd_j|), which reads as a
// relative error for every component that carries weight and an absolute
// bound of 1e-6 * max|fd| for the rest (central differences with h = 1e-4
// cannot resolve those to relative precision).
EndToEndCheck check_end_to_end(double t_frac, std::uint64_t seed);

// Same pipeline with the Gaussian latent: worst scaled error of dL/dz_c.
double check_end_to_end_classical(double t_frac, std::uint64_t seed);

struct GradCheckLine {
  std::string name;
  double err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Everything above with the standard tolerances, for the CLI.
std::vector<GradCheckLine> run_all_gradchecks(std::uint64_t seed);

}  // namespace latopt
