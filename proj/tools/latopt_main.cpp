#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "latopt/config.hpp"
#include "latopt/gradcheck.hpp"
#include "latopt/io.hpp"
#include "latopt/kernels.hpp"
#include "latopt/optimize.hpp"
#include "latopt/verify.hpp"

namespace {

using namespace latopt;

// Shared option set for run and sweep. Every value funnels through the same
// key parser as the config file, so overrides behave identically to file
// entries. Precedence: built-in defaults < config file < LATOPT_OUTPUT_DIR
// < explicit flags.
class ConfigOpts {
 public:
  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path_, "settings file, 'key = value' lines");
    add(cmd, "problem", "benchmark: tip_cantilever, ss_bottom, mid_cantilever");
    add(cmd, "encoding", "latent source: quantum or classical");
    add(cmd, "n_qubits", "circuit width");
    add(cmd, "n_layers", "entangling repetitions");
    add(cmd, "d_z", "projected latent width");
    add(cmd, "iterations", "training iterations (0 picks the mode default)");
    add(cmd, "seed", "base RNG seed");
    add(cmd, "nx", "mesh cells in x");
    add(cmd, "ny", "mesh cells in y");
    add(cmd, "vstar", "target volume fraction");
    add(cmd, "output_dir", "directory for the result files");
    cmd->add_flag("--filtering", filtering_, "density-filter mode (Heaviside projection)");
    cmd->add_flag("--symmetry", symmetry_, "enable the symmetry penalty");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path_.empty()) load_config_file(cfg, config_path_);
    if (const char* env = std::getenv("LATOPT_OUTPUT_DIR"); env && *env)
      cfg.output_dir = env;
    for (const auto& [key, slot] : slots_)
      if (slot->opt->count() > 0) apply_config_kv(cfg, key, slot->value);
    if (filtering_) apply_config_kv(cfg, "filtering", "true");
    if (symmetry_) apply_config_kv(cfg, "symmetry", "true");
    validate_config(cfg);
    return cfg;
  }

 private:
  struct Slot {
    std::string value;
    CLI::Option* opt = nullptr;
  };

  void add(CLI::App* cmd, const std::string& key, const std::string& help) {
    auto slot = std::make_unique<Slot>();
    slot->opt = cmd->add_option("--" + key, slot->value, help);
    slots_.emplace_back(key, std::move(slot));
  }

  std::string config_path_;
  bool filtering_ = false;
  bool symmetry_ = false;
  std::vector<std::pair<std::string, std::unique_ptr<Slot>>> slots_;
};

int report_aborted(const RunResult& res) {
  std::cerr << "solver failure at " << res.error
            << " (partial history written)\n";
  return 1;
}

int do_run(const RunConfig& cfg) {
  const RunResult res = train(cfg);
  write_run_outputs(cfg.output_dir, res);
  if (res.aborted) return report_aborted(res);
  std::printf("%s %s seed %llu: compliance %.6g, volume %.4f, %.1f s\n",
              benchmark_name(cfg.benchmark).c_str(), encoding_name(cfg.encoding).c_str(),
              static_cast<unsigned long long>(res.seed), res.history.back().compliance,
              res.history.back().volume, res.wallclock_s);
  std::printf("wrote density.csv, density.pgm, history.csv, summary.txt to %s\n",
              cfg.output_dir.c_str());
  return 0;
}

int do_sweep(const RunConfig& cfg, int n_runs) {
  const std::vector<RunResult> runs = sweep(cfg, n_runs);
  namespace fs = std::filesystem;
  bool any_aborted = false;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    char sub[16];
    std::snprintf(sub, sizeof sub, "run_%02zu", i);
    write_run_outputs((fs::path(cfg.output_dir) / sub).string(), runs[i]);
    if (runs[i].aborted) {
      report_aborted(runs[i]);
      any_aborted = true;
      continue;
    }
    std::printf("%s seed %llu: compliance %.6g, volume %.4f\n", sub,
                static_cast<unsigned long long>(runs[i].seed),
                runs[i].history.back().compliance, runs[i].history.back().volume);
  }
  if (any_aborted) return 1;
  const SweepSummary s = summarize_sweep(runs);
  write_sweep_summary((fs::path(cfg.output_dir) / "sweep_summary.txt").string(), s);
  std::printf("compliance at iteration %d: %.6g +- %.6g, diversity %.6g\n",
              s.checkpoint, s.compliance.mean, s.compliance.stddev, s.diversity);
  return 0;
}

int do_verify() {
  const std::vector<VerifyRow> rows = reference_circuit_report();
  int failed = 0;
  std::printf("%-22s %12s %10s   status\n", "value", "computed", "expected");
  for (const VerifyRow& r : rows) {
    std::printf("%-22s %12.7f %10.4f   %s\n", r.name.c_str(), r.computed, r.expected,
                r.pass ? "ok" : "MISMATCH");
    if (!r.pass) ++failed;
  }
  if (failed)
    std::printf("%d of %zu values off by more than 5e-4\n", failed, rows.size());
  else
    std::printf("all %zu values within 5e-4\n", rows.size());
  return failed == 0 ? 0 : 1;
}

int do_gradcheck(std::uint64_t seed) {
  std::printf("kernel backend: %s\n",
              kernels::backend_name(kernels::active_backend()).c_str());
  const std::vector<GradCheckLine> lines = run_all_gradchecks(seed);
  int failed = 0;
  for (const GradCheckLine& l : lines) {
    std::printf("%-26s %10.3e  tol %8.1e  %s\n", l.name.c_str(), l.err, l.tol,
                l.pass ? "ok" : "FAIL");
    if (!l.pass) ++failed;
  }
  if (failed)
    std::printf("%d of %zu checks failed\n", failed, lines.size());
  else
    std::printf("all %zu checks passed\n", lines.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent-parameterized topology optimization"};
  app.require_subcommand(1);

  ConfigOpts run_opts;
  CLI::App* cmd_run = app.add_subcommand("run", "train once and write the result files");
  run_opts.attach(cmd_run);

  ConfigOpts sweep_opts;
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "repeat training over consecutive seeds");
  sweep_opts.attach(cmd_sweep);
  int n_runs = 10;
  cmd_sweep->add_option("--runs", n_runs, "number of seeds")
      ->check(CLI::PositiveNumber);

  CLI::App* cmd_verify =
      app.add_subcommand("verify", "recompute the fixed two-qubit reference circuit");

  CLI::App* cmd_gradcheck =
      app.add_subcommand("gradcheck", "run every finite-difference gradient suite");
  std::uint64_t gc_seed = 7;
  cmd_gradcheck->add_option("--seed", gc_seed, "RNG seed for the random trials");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) return do_run(run_opts.resolve());
    if (cmd_sweep->parsed()) return do_sweep(sweep_opts.resolve(), n_runs);
    if (cmd_verify->parsed()) return do_verify();
    return do_gradcheck(gc_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
