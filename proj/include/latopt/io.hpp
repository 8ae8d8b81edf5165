#pragma once

#include <string>
#include <vector>

#include "latopt/grid.hpp"
#include "latopt/optimize.hpp"

namespace latopt {

// All files are plain LF text with '.' as the decimal separator, so a rerun
// with the same seed reproduces them byte for byte (summary.txt excepted,
// it records the wallclock). Grids are written top row first, i.e. the
// highest iy comes out on line one.

// ny lines of nx comma-separated densities, 6 decimals.
void write_density_csv(const std::string& path, const Grid2D& rho);

// Plain-text PGM (P2, maxval 255), grey = round(255 * rho).
void write_density_pgm(const std::string& path, const Grid2D& rho);

// Header "iter,compliance,volume,c_norm,vol,bin,tv,h1,sym,total" plus one
// row per recorded iteration.
void write_history_csv(const std::string& path, const std::vector<IterRecord>& history);

// "key = value" lines: final_compliance, final_volume, seed, wallclock_s.
void write_run_summary(const std::string& path, const RunResult& res);

// "key = value" lines: n_runs, base_seed, checkpoint_iteration,
// compliance_mean, compliance_std, design_diversity. No timing fields, so
// the file is reproducible bit for bit.
void write_sweep_summary(const std::string& path, const SweepSummary& s);

// Creates dir if needed and writes density.csv, density.pgm, history.csv,
// summary.txt for one finished run.
void write_run_outputs(const std::string& dir, const RunResult& res);

}  // namespace latopt
