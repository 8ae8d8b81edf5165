#include "latopt/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace latopt {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_density_csv(const std::string& path, const Grid2D& rho) {
  std::ofstream f = open_out(path);
  char buf[16];
  for (int iy = rho.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < rho.nx; ++ix) {
      std::snprintf(buf, sizeof buf, "%.6f", rho.at(ix, iy));
      f << (ix ? "," : "") << buf;
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_density_pgm(const std::string& path, const Grid2D& rho) {
  std::ofstream f = open_out(path);
  f << "P2\n" << rho.nx << ' ' << rho.ny << "\n255\n";
  for (int iy = rho.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < rho.nx; ++ix) {
      long g = std::lround(255.0 * rho.at(ix, iy));
      if (g < 0) g = 0;
      if (g > 255) g = 255;
      f << (ix ? " " : "") << g;
    }
    f << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_history_csv(const std::string& path, const std::vector<IterRecord>& history) {
  std::ofstream f = open_out(path);
  f << "iter,compliance,volume,c_norm,vol,bin,tv,h1,sym,total\n";
  for (const IterRecord& r : history) {
    f << r.iter << ',' << num(r.compliance) << ',' << num(r.volume) << ','
      << num(r.terms.c_norm) << ',' << num(r.terms.vol) << ',' << num(r.terms.bin)
      << ',' << num(r.terms.tv) << ',' << num(r.terms.h1) << ',' << num(r.terms.sym)
      << ',' << num(r.terms.total) << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_run_summary(const std::string& path, const RunResult& res) {
  std::ofstream f = open_out(path);
  const IterRecord* last = res.history.empty() ? nullptr : &res.history.back();
  f << "final_compliance = " << num(last ? last->compliance : 0.0) << '\n';
  f << "final_volume = " << num(last ? last->volume : 0.0) << '\n';
  f << "seed = " << res.seed << '\n';
  f << "wallclock_s = " << num(res.wallclock_s) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_sweep_summary(const std::string& path, const SweepSummary& s) {
  std::ofstream f = open_out(path);
  f << "n_runs = " << s.n_runs << '\n';
  f << "base_seed = " << s.base_seed << '\n';
  f << "checkpoint_iteration = " << s.checkpoint << '\n';
  f << "compliance_mean = " << num(s.compliance.mean) << '\n';
  f << "compliance_std = " << num(s.compliance.stddev) << '\n';
  f << "design_diversity = " << num(s.diversity) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_run_outputs(const std::string& dir, const RunResult& res) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  if (res.final_field.size() > 0) {
    write_density_csv((base / "density.csv").string(), res.final_field);
    write_density_pgm((base / "density.pgm").string(), res.final_field);
  }
  write_history_csv((base / "history.csv").string(), res.history);
  write_run_summary((base / "summary.txt").string(), res);
}

}  // namespace latopt
