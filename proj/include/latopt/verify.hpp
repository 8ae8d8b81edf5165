#pragma once

#include <string>
#include <vector>

namespace latopt {

struct VerifyRow {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Recomputes a fixed two-qubit reference circuit (rotation angles pi/3 and
// pi/4, one CNOT stage, then pi/6 and pi/5) and compares every intermediate
// amplitude and the latent readout against reference values recorded to
// four decimals. One row per compared number.
std::vector<VerifyRow> reference_circuit_report();

}  // namespace latopt
