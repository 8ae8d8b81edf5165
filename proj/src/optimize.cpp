#include "latopt/optimize.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace latopt {

namespace {
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;
}

AdamState make_adam(std::size_t n, double lr) {
  AdamState st;
  st.lr = lr;
  st.m.assign(n, 0.0);
  st.v.assign(n, 0.0);
  return st;
}

void adam_step(AdamState& st, std::vector<double>& x, const std::vector<double>& g) {
  if (x.size() != st.m.size() || g.size() != st.m.size())
    throw std::invalid_argument("adam_step: size mismatch");
  st.t += 1;
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(st.t));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(st.t));
  for (std::size_t i = 0; i < x.size(); ++i) {
    st.m[i] = kAdamBeta1 * st.m[i] + (1.0 - kAdamBeta1) * g[i];
    st.v[i] = kAdamBeta2 * st.v[i] + (1.0 - kAdamBeta2) * g[i] * g[i];
    const double mhat = st.m[i] / c1;
    const double vhat = st.v[i] / c2;
    x[i] -= st.lr * mhat / (std::sqrt(vhat) + kAdamEps);
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

PipelineState init_pipeline(const RunConfig& cfg_in) {
  PipelineState st;
  st.cfg = cfg_in;
  validate_config(st.cfg);
  const RunConfig& cfg = st.cfg;

  st.prob = build_benchmark(cfg.benchmark, cfg.nx, cfg.ny);
  st.fourier = sample_frequencies(kFourierCount, kFourierMin, kFourierMax,
                                  mix_seed(cfg.seed, 1));
  st.gamma = fourier_map(st.fourier, make_coordinate_grid(cfg.nx, cfg.ny));
  st.dec = init_decoder(cfg.d_z + 2 * kFourierCount, mix_seed(cfg.seed, 2));
  st.proj = ProjectionLayer(cfg.d_z, latent_width(cfg), mix_seed(cfg.seed, 3));
  if (cfg.encoding == Encoding::quantum)
    st.theta = random_theta(cfg.n_qubits, cfg.n_layers, mix_seed(cfg.seed, 4));
  else
    st.z_c = init_classical(latent_width(cfg), mix_seed(cfg.seed, 4));
  if (cfg.filtering) st.filt = build_filter(cfg.nx, cfg.ny, kFilterRadius);
  return st;
}

ForwardResult forward_pass(PipelineState& st, int t) {
  const RunConfig& cfg = st.cfg;
  ScheduleConfig sc;
  sc.T = cfg.iterations;
  sc.lam_sym_max = cfg.symmetry ? kLamSymMax : 0.0;

  ForwardResult fr;
  fr.sched = schedule_at(sc, t);

  if (cfg.encoding == Encoding::quantum)
    fr.z_small = measure_latent(run_circuit(st.theta));
  else
    fr.z_small = st.z_c;
  fr.z_p = st.proj.forward(fr.z_small);

  const Grid2D raw = decode(st.dec, fr.z_p, st.gamma, cfg.nx, cfg.ny, &fr.cache);
  if (cfg.filtering) {
    fr.beta_h = heaviside_beta_at(t);
    fr.rho_tilde = density_filter(st.filt, raw);
    fr.phys = heaviside_project(fr.rho_tilde, fr.beta_h);
  } else {
    fr.phys = sharpen(raw, fr.sched.beta);
  }

  fr.fem = assemble_and_solve(st.prob, fr.phys);
  if (st.C0 < 0.0) {
    if (!(fr.fem.compliance > 0.0))
      throw std::runtime_error("forward_pass: first compliance not positive");
    st.C0 = fr.fem.compliance;
  }

  fr.pen_grad = Grid2D(cfg.nx, cfg.ny);
  fr.terms = total_loss(fr.fem.compliance, st.C0, fr.phys, fr.sched, cfg.vstar,
                        /*with_regularizers=*/!cfg.filtering, &fr.pen_grad);
  return fr;
}

PipelineGrad backward_pass(const PipelineState& st, const ForwardResult& fr) {
  const RunConfig& cfg = st.cfg;

  // Total field cotangent: scheduled penalties plus the normalized
  // compliance term through the solver's self-adjoint sensitivity.
  Grid2D cot_phys = fr.pen_grad;
  const Grid2D sens = compliance_sensitivity(st.prob, fr.phys, fr.fem.u);
  for (std::size_t i = 0; i < cot_phys.v.size(); ++i)
    cot_phys.v[i] += sens.v[i] / st.C0;

  std::vector<double> cot_raw;
  if (cfg.filtering)
    cot_raw = filter_chain_backward(st.filt, fr.rho_tilde, fr.beta_h, cot_phys.v);
  else
    cot_raw = sharpen_backward(fr.cache.raw, fr.sched.beta, cot_phys.v);

  PipelineGrad g;
  g.dec = decode_backward_raw(st.dec, fr.cache, fr.z_p, st.gamma, cot_raw);
  g.proj = project_backward(st.proj, fr.z_small, g.dec.dz_p);
  if (cfg.encoding == Encoding::quantum)
    g.d_theta = param_shift_grad(st.theta, g.proj.dz);
  else
    g.d_zc = g.proj.dz;
  return g;
}

RunResult train(const RunConfig& cfg_in) {
  const auto t_start = std::chrono::steady_clock::now();
  PipelineState st = init_pipeline(cfg_in);
  const RunConfig& cfg = st.cfg;

  AdamState opt_latent =
      cfg.encoding == Encoding::quantum
          ? make_adam(st.theta.count(), kLrTheta)
          : make_adam(st.z_c.size(), kLrLatent);
  AdamState opt_pw = make_adam(st.proj.W.size(), kLrProjection);
  AdamState opt_pb = make_adam(st.proj.b.size(), kLrProjection);
  AdamState opt_w1 = make_adam(st.dec.W1.size(), kLrDecoder);
  AdamState opt_b1 = make_adam(st.dec.b1.size(), kLrDecoder);
  AdamState opt_w2 = make_adam(st.dec.W2.size(), kLrDecoder);
  AdamState opt_b2 = make_adam(st.dec.b2.size(), kLrDecoder);
  AdamState opt_w3 = make_adam(st.dec.W3.size(), kLrDecoder);
  AdamState opt_b3 = make_adam(st.dec.b3.size(), kLrDecoder);
  AdamState opt_w4 = make_adam(st.dec.W4.size(), kLrDecoder);
  AdamState opt_b4 = make_adam(st.dec.b4.size(), kLrDecoder);

  RunResult res;
  res.cfg = cfg;
  res.seed = cfg.seed;
  res.history.reserve(cfg.iterations);

  for (int t = 0; t < cfg.iterations; ++t) {
    ForwardResult fr;
    try {
      fr = forward_pass(st, t);
    } catch (const std::runtime_error& e) {
      // Solver breakdown: keep the history up to here so the caller can
      // still see how far the run got.
      res.aborted = true;
      res.error = "iteration " + std::to_string(t) + ": " + e.what();
      break;
    }
    IterRecord rec;
    rec.iter = t;
    rec.compliance = fr.fem.compliance;
    rec.volume = fr.phys.mean();
    rec.terms = fr.terms;
    res.history.push_back(rec);
    if (t + 1 == cfg.iterations) res.final_field = fr.phys;

    PipelineGrad g = backward_pass(st, fr);
    if (cfg.encoding == Encoding::quantum)
      adam_step(opt_latent, st.theta.v, g.d_theta);
    else
      adam_step(opt_latent, st.z_c, g.d_zc);
    adam_step(opt_pw, st.proj.W, g.proj.dW);
    adam_step(opt_pb, st.proj.b, g.proj.db);
    adam_step(opt_w1, st.dec.W1, g.dec.dW1);
    adam_step(opt_b1, st.dec.b1, g.dec.db1);
    adam_step(opt_w2, st.dec.W2, g.dec.dW2);
    adam_step(opt_b2, st.dec.b2, g.dec.db2);
    adam_step(opt_w3, st.dec.W3, g.dec.dW3);
    adam_step(opt_b3, st.dec.b3, g.dec.db3);
    adam_step(opt_w4, st.dec.W4, g.dec.dW4);
    adam_step(opt_b4, st.dec.b4, g.dec.db4);
  }

  res.wallclock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

std::vector<RunResult> sweep_seeds(const RunConfig& cfg,
                                   const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("sweep_seeds: no seeds given");
  std::vector<RunResult> runs;
  runs.reserve(seeds.size());
  for (std::uint64_t s : seeds) {
    RunConfig c = cfg;
    c.seed = s;
    runs.push_back(train(c));
  }
  return runs;
}

std::vector<RunResult> sweep(const RunConfig& cfg, int n_runs) {
  if (n_runs < 1) throw std::invalid_argument("sweep: need at least one run");
  std::vector<std::uint64_t> seeds;
  seeds.reserve(n_runs);
  for (int i = 0; i < n_runs; ++i) seeds.push_back(cfg.seed + static_cast<std::uint64_t>(i));
  return sweep_seeds(cfg, seeds);
}

SweepSummary summarize_sweep(const std::vector<RunResult>& runs) {
  if (runs.empty()) throw std::invalid_argument("summarize_sweep: no runs");
  SweepSummary s;
  s.n_runs = static_cast<int>(runs.size());
  s.base_seed = runs.front().seed;
  const int T = static_cast<int>(runs.front().history.size());
  s.checkpoint = std::min(200, T);
  std::vector<double> comp;
  comp.reserve(runs.size());
  std::vector<std::vector<double>> fields;
  fields.reserve(runs.size());
  for (const RunResult& r : runs) {
    if (static_cast<int>(r.history.size()) != T)
      throw std::invalid_argument("summarize_sweep: runs differ in length");
    comp.push_back(r.history[s.checkpoint - 1].compliance);
    fields.push_back(r.final_field.v);
  }
  s.compliance = run_stats(comp);
  s.diversity = runs.size() >= 2 ? design_diversity(fields) : 0.0;
  return s;
}

}  // namespace latopt
