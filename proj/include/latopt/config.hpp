#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "latopt/fem.hpp"

namespace latopt {

enum class Encoding { quantum, classical };

Encoding encoding_from_string(const std::string& name);
std::string encoding_name(Encoding e);

// Full run description. Defaults reproduce the standard experiment: 60x30
// tip cantilever, 3-qubit circuit with 5 entangling layers, 200 iterations
// (500 when the filtered comparison mode is on), volume target 0.4.
struct RunConfig {
  Benchmark benchmark = Benchmark::tip_cantilever;
  Encoding encoding = Encoding::quantum;
  int n_qubits = 3;
  int n_layers = 5;
  int d_z = 64;
  int iterations = 0;        // 0 = pick the mode default in validate()
  bool filtering = false;
  bool symmetry = false;
  std::uint64_t seed = 0;
  int nx = 60;
  int ny = 30;
  double vstar = 0.4;
  std::string output_dir = "out";
};

// Parses a flat "key = value" file ('#' starts a comment, blank lines
// allowed). Unknown keys and malformed values raise std::invalid_argument
// naming the key. The file's settings overwrite cfg in place.
void load_config_file(RunConfig& cfg, const std::string& path);

// Applies one key=value pair (same keys as the file format).
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

// Range-checks everything and resolves the iteration default (200, or 500
// with filtering). Throws std::invalid_argument on violations.
void validate_config(RunConfig& cfg);

// The latent width fed to the projection: 3 readouts per qubit, and the
// classical vector matches it.
int latent_width(const RunConfig& cfg);

}  // namespace latopt
