#include "latopt/config.hpp"

#include <fstream>
#include <stdexcept>

namespace latopt {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected integer, got '" +
                                value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected number, got '" +
                                value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key '" + key + "': expected true/false, got '" +
                              value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "': expected unsigned integer, got '" + value + "'");
  }
}

}  // namespace

Encoding encoding_from_string(const std::string& name) {
  if (name == "quantum") return Encoding::quantum;
  if (name == "classical") return Encoding::classical;
  throw std::invalid_argument("unknown encoding: " + name);
}

std::string encoding_name(Encoding e) {
  return e == Encoding::quantum ? "quantum" : "classical";
}

void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "problem") {
    cfg.benchmark = benchmark_from_string(value);
  } else if (key == "encoding") {
    cfg.encoding = encoding_from_string(value);
  } else if (key == "n_qubits") {
    cfg.n_qubits = parse_int(key, value);
  } else if (key == "n_layers") {
    cfg.n_layers = parse_int(key, value);
  } else if (key == "d_z") {
    cfg.d_z = parse_int(key, value);
  } else if (key == "iterations") {
    cfg.iterations = parse_int(key, value);
  } else if (key == "filtering") {
    cfg.filtering = parse_bool(key, value);
  } else if (key == "symmetry") {
    cfg.symmetry = parse_bool(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "nx") {
    cfg.nx = parse_int(key, value);
  } else if (key == "ny") {
    cfg.ny = parse_int(key, value);
  } else if (key == "vstar") {
    cfg.vstar = parse_double(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    apply_config_kv(cfg, key, value);
  }
}

void validate_config(RunConfig& cfg) {
  if (cfg.iterations == 0) cfg.iterations = cfg.filtering ? 500 : 200;
  if (cfg.iterations < 1)
    throw std::invalid_argument("config: iterations must be at least 1");
  if (cfg.nx < 1 || cfg.ny < 1)
    throw std::invalid_argument("config: mesh dimensions must be positive");
  if (cfg.n_qubits < 1)
    throw std::invalid_argument("config: n_qubits must be at least 1");
  if (cfg.n_qubits > 20)
    throw std::invalid_argument("config: n_qubits above 20 is not simulable here");
  if (cfg.n_layers < 0)
    throw std::invalid_argument("config: n_layers must not be negative");
  if (cfg.d_z <= latent_width(cfg))
    throw std::invalid_argument("config: d_z must exceed the latent width (3 * n_qubits)");
  if (!(cfg.vstar > 0.0 && cfg.vstar < 1.0))
    throw std::invalid_argument("config: vstar must lie strictly between 0 and 1");
  if (cfg.output_dir.empty())
    throw std::invalid_argument("config: output_dir must not be empty");
}

int latent_width(const RunConfig& cfg) { return 3 * cfg.n_qubits; }

}  // namespace latopt
