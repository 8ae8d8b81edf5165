#pragma once

#include <cstdint>
#include <vector>

#include "latopt/config.hpp"
#include "latopt/fem.hpp"
#include "latopt/filtering.hpp"
#include "latopt/latent.hpp"
#include "latopt/loss.hpp"
#include "latopt/metrics.hpp"
#include "latopt/neuralfield.hpp"
#include "latopt/quantum.hpp"

namespace latopt {

// Learning rates per parameter group. The circuit angles move on a much
// larger scale than network weights, hence the spread.
constexpr double kLrDecoder = 1e-3;
constexpr double kLrProjection = 1e-3;
constexpr double kLrLatent = 1e-2;
constexpr double kLrTheta = 1e-1;

constexpr int kFourierCount = 32;
constexpr double kFourierMin = 0.5;
constexpr double kFourierMax = 8.0;
constexpr double kFilterRadius = 1.5;
constexpr double kLamSymMax = 0.1;

struct AdamState {
  double lr = 0.0;
  long t = 0;
  std::vector<double> m, v;
};

AdamState make_adam(std::size_t n, double lr);

// One bias-corrected Adam update (beta1 = 0.9, beta2 = 0.999, eps = 1e-8).
void adam_step(AdamState& st, std::vector<double>& x, const std::vector<double>& g);

// Stateless seed derivation for the independent init streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

// Everything a run owns: the problem, the fixed encodings, and the
// trainable parameters. C0 starts negative and is frozen by the first
// forward pass.
struct PipelineState {
  RunConfig cfg;
  FemProblem prob;
  FourierMap fourier;
  std::vector<double> gamma;  // N x 2m, fixed per run
  ThetaParams theta;          // quantum encoding
  std::vector<double> z_c;    // classical encoding
  ProjectionLayer proj;
  DecoderWeights dec;
  FilterKernel filt;          // built only in filtering mode
  double C0 = -1.0;
};

PipelineState init_pipeline(const RunConfig& cfg);

struct ForwardResult {
  ScheduleState sched;
  double beta_h = 0.0;        // filtering mode only
  std::vector<double> z_small;
  std::vector<double> z_p;
  DecodeCache cache;
  Grid2D rho_tilde;           // filtered field (filtering mode)
  Grid2D phys;                // field sent to the solver
  SolveResult fem;
  LossTerms terms;
  Grid2D pen_grad;            // d(penalties)/d(phys)
};

// Forward at iteration t. Freezes st.C0 on the first call.
ForwardResult forward_pass(PipelineState& st, int t);

struct PipelineGrad {
  std::vector<double> d_theta;  // quantum runs
  std::vector<double> d_zc;     // classical runs
  ProjectionGrad proj;
  DecoderGrad dec;
};

// Exact reverse pass for the iteration captured in fr.
PipelineGrad backward_pass(const PipelineState& st, const ForwardResult& fr);

struct IterRecord {
  int iter = 0;
  double compliance = 0.0;
  double volume = 0.0;
  LossTerms terms;
};

struct RunResult {
  RunConfig cfg;
  std::uint64_t seed = 0;
  std::vector<IterRecord> history;
  Grid2D final_field;  // physical field of the last iteration
  double wallclock_s = 0.0;
  bool aborted = false;  // solver failure mid-run; history holds what finished
  std::string error;
};

RunResult train(const RunConfig& cfg);

// One training run per seed, sequentially, same config otherwise.
std::vector<RunResult> sweep_seeds(const RunConfig& cfg,
                                   const std::vector<std::uint64_t>& seeds);

// Standard sweep: seeds cfg.seed + 0 .. cfg.seed + n_runs - 1.
std::vector<RunResult> sweep(const RunConfig& cfg, int n_runs);

struct SweepSummary {
  int n_runs = 0;
  std::uint64_t base_seed = 0;
  int checkpoint = 0;       // 1-based iteration the statistics are read at
  RunStats compliance;
  double diversity = 0.0;   // 0 when only one run
};

SweepSummary summarize_sweep(const std::vector<RunResult>& runs);

}  // namespace latopt
