#include "latopt/verify.hpp"

#include <array>
#include <cmath>
#include <string>

#include "latopt/quantum.hpp"

namespace latopt {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTol = 5e-4;  // reference values carry four decimals

void add_state_rows(std::vector<VerifyRow>& rows, const std::string& prefix,
                    const StateVector& s, const std::array<double, 4>& expected) {
  for (int i = 0; i < 4; ++i) {
    VerifyRow r;
    r.name = prefix + "[" + std::to_string(i) + "]";
    r.computed = s.amp[i];
    r.expected = expected[i];
    r.tol = kTol;
    r.pass = std::abs(r.computed - r.expected) <= r.tol;
    rows.push_back(r);
  }
}

void add_row(std::vector<VerifyRow>& rows, const std::string& name,
             double computed, double expected) {
  VerifyRow r;
  r.name = name;
  r.computed = computed;
  r.expected = expected;
  r.tol = kTol;
  r.pass = std::abs(computed - expected) <= r.tol;
  rows.push_back(r);
}

}  // namespace

std::vector<VerifyRow> reference_circuit_report() {
  std::vector<VerifyRow> rows;

  StateVector s(2);
  apply_ry(s, 0, kPi / 3.0);
  apply_ry(s, 1, kPi / 4.0);
  add_state_rows(rows, "after_rotations_0", s, {0.8001, 0.3308, 0.4619, 0.1913});

  entangle_layer(s);
  add_state_rows(rows, "after_entangler", s, {0.8001, 0.3308, 0.1913, 0.4619});

  apply_ry(s, 0, kPi / 6.0);
  apply_ry(s, 1, kPi / 5.0);
  add_state_rows(rows, "final_state", s, {0.6259, 0.4143, 0.2083, 0.6270});

  const std::array<double, 2> z_expected = {0.3914, -0.0773};
  const std::array<double, 2> x_expected = {0.7799, 0.7802};
  for (int q = 0; q < 2; ++q)
    add_row(rows, "z[" + std::to_string(q) + "]",
            expectation(s, Pauli::Z, q), z_expected[q]);
  for (int q = 0; q < 2; ++q)
    add_row(rows, "x[" + std::to_string(q) + "]",
            expectation(s, Pauli::X, q), x_expected[q]);
  for (int q = 0; q < 2; ++q)
    add_row(rows, "y[" + std::to_string(q) + "]",
            expectation(s, Pauli::Y, q), 0.0);
  return rows;
}

}  // namespace latopt
