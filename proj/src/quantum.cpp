#include "latopt/quantum.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace latopt {

namespace {

void check_qubit(const StateVector& s, int q, const char* who) {
  if (q < 0 || q >= s.n_qubits)
    throw std::out_of_range(std::string(who) + ": qubit index out of range");
}

// Bit position of qubit q in the basis index (qubit 0 = most significant).
inline int bitpos(int n_qubits, int q) { return n_qubits - 1 - q; }

}  // namespace

StateVector::StateVector(int n) : n_qubits(n) {
  if (n < 1 || n > 24)
    throw std::invalid_argument("StateVector: qubit count must be in [1, 24]");
  amp.assign(std::size_t{1} << n, 0.0);
  amp[0] = 1.0;
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (double a : amp) s += a * a;
  return s;
}

ThetaParams::ThetaParams(int n, int r, double fill) : n_qubits(n), layers(r) {
  if (n < 1) throw std::invalid_argument("ThetaParams: need at least one qubit");
  if (r < 0) throw std::invalid_argument("ThetaParams: negative layer count");
  v.assign(static_cast<std::size_t>(r + 1) * n, fill);
}

ThetaParams random_theta(int n_qubits, int layers, std::uint64_t seed) {
  ThetaParams t(n_qubits, layers);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-M_PI, M_PI);
  for (double& x : t.v) x = dist(rng);
  return t;
}

void apply_ry(StateVector& s, int qubit, double angle) {
  check_qubit(s, qubit, "apply_ry");
  const double c = std::cos(angle / 2.0);
  const double sn = std::sin(angle / 2.0);
  const std::size_t stride = std::size_t{1} << bitpos(s.n_qubits, qubit);
  const std::size_t n = s.amp.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const double lo = s.amp[i];
      const double hi = s.amp[i + stride];
      s.amp[i] = c * lo - sn * hi;
      s.amp[i + stride] = sn * lo + c * hi;
    }
  }
}

void apply_cnot(StateVector& s, int control, int target) {
  check_qubit(s, control, "apply_cnot");
  check_qubit(s, target, "apply_cnot");
  if (control == target)
    throw std::invalid_argument("apply_cnot: control equals target");
  const std::size_t cbit = std::size_t{1} << bitpos(s.n_qubits, control);
  const std::size_t tbit = std::size_t{1} << bitpos(s.n_qubits, target);
  const std::size_t n = s.amp.size();
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(s.amp[i], s.amp[i | tbit]);
  }
}

void entangle_layer(StateVector& s) {
  for (int q = 0; q + 1 < s.n_qubits; ++q) apply_cnot(s, q, q + 1);
}

StateVector run_circuit(const ThetaParams& theta) {
  StateVector s(theta.n_qubits);
  for (int q = 0; q < theta.n_qubits; ++q) apply_ry(s, q, theta.at(0, q));
  for (int k = 1; k <= theta.layers; ++k) {
    entangle_layer(s);
    for (int q = 0; q < theta.n_qubits; ++q) apply_ry(s, q, theta.at(k, q));
  }
  return s;
}

double expectation(const StateVector& s, Pauli p, int qubit) {
  check_qubit(s, qubit, "expectation");
  if (p == Pauli::Y) return 0.0;  // exact for real amplitudes
  const std::size_t stride = std::size_t{1} << bitpos(s.n_qubits, qubit);
  const std::size_t n = s.amp.size();
  double acc = 0.0;
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const double lo = s.amp[i];
      const double hi = s.amp[i + stride];
      acc += p == Pauli::Z ? lo * lo - hi * hi : 2.0 * lo * hi;
    }
  }
  return acc;
}

std::vector<double> measure_latent(const StateVector& s) {
  std::vector<double> z;
  z.reserve(3 * static_cast<std::size_t>(s.n_qubits));
  for (Pauli p : {Pauli::Z, Pauli::X, Pauli::Y})
    for (int q = 0; q < s.n_qubits; ++q) z.push_back(expectation(s, p, q));
  return z;
}

std::vector<double> param_shift_grad(const ThetaParams& theta,
                                     const std::vector<double>& cot) {
  if (cot.size() != 3 * static_cast<std::size_t>(theta.n_qubits))
    throw std::invalid_argument("param_shift_grad: cotangent must have 3n entries");
  auto weighted = [&](const ThetaParams& t) {
    const std::vector<double> z = measure_latent(run_circuit(t));
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) acc += cot[i] * z[i];
    return acc;
  };
  std::vector<double> grad(theta.count());
  ThetaParams shifted = theta;
  for (std::size_t j = 0; j < theta.count(); ++j) {
    const double saved = shifted.v[j];
    shifted.v[j] = saved + M_PI / 2.0;
    const double plus = weighted(shifted);
    shifted.v[j] = saved - M_PI / 2.0;
    const double minus = weighted(shifted);
    shifted.v[j] = saved;
    grad[j] = 0.5 * (plus - minus);
  }
  return grad;
}

}  // namespace latopt
