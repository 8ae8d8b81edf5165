#pragma once

#include <cstdint>
#include <vector>

namespace latopt {

// Real-amplitude statevector over n qubits, 2^n entries. Qubit 0 is the
// most significant bit of the basis index. All circuit angles enter through
// RY rotations, whose matrices are real, so amplitudes stay real throughout
// and Y expectations vanish identically.
struct StateVector {
  int n_qubits = 0;
  std::vector<double> amp;

  explicit StateVector(int n);   // initialized to |0...0>
  double norm_sq() const;
};

// Circuit angles: (layers+1) rows of n_qubits entries. Row 0 is the initial
// rotation layer, rows 1..layers follow one entangling stage each.
struct ThetaParams {
  int n_qubits = 0;
  int layers = 0;               // number of entangle+rotate repetitions
  std::vector<double> v;        // (layers+1) * n_qubits, row-major

  ThetaParams() = default;
  ThetaParams(int n, int r, double fill = 0.0);
  double& at(int layer, int qubit) { return v[static_cast<std::size_t>(layer) * n_qubits + qubit]; }
  double at(int layer, int qubit) const { return v[static_cast<std::size_t>(layer) * n_qubits + qubit]; }
  std::size_t count() const { return v.size(); }
};

// Uniform angles in [-pi, pi), seeded.
ThetaParams random_theta(int n_qubits, int layers, std::uint64_t seed);

void apply_ry(StateVector& s, int qubit, double angle);
void apply_cnot(StateVector& s, int control, int target);

// CNOT chain control i -> target i+1 for i = 0..n-2, ascending. No-op for a
// single qubit.
void entangle_layer(StateVector& s);

// Initial RY layer, then layers repetitions of (entangle, RY layer).
StateVector run_circuit(const ThetaParams& theta);

enum class Pauli { Z, X, Y };

double expectation(const StateVector& s, Pauli p, int qubit);

// Latent readout: [<Z_0>..<Z_{n-1}>, <X_0>.., <Y_0>..], 3n entries in [-1,1].
std::vector<double> measure_latent(const StateVector& s);

// d(cot . z)/d(theta) by the parameter-shift rule: each angle is shifted by
// +-pi/2 and the full circuit re-run. cot must have 3n entries. The result
// has theta.count() entries in the same row-major order.
std::vector<double> param_shift_grad(const ThetaParams& theta,
                                     const std::vector<double>& cot);

}  // namespace latopt
