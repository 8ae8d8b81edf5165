#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "latopt/grid.hpp"

namespace latopt {

// Plane-stress SIMP material. Densities interpolate the Young modulus
// between Emin (void floor, keeps the system definite) and E0.
struct Material {
  double E0 = 1.0;
  double Emin = 1e-9;
  double nu = 0.3;
  double penal = 3.0;
};

double simp_modulus(double rho, const Material& mat);

// 8x8 stiffness of a unit bilinear quad with E = 1, 2x2 Gauss quadrature.
// Node order is counterclockwise from the bottom-left corner; per node the
// x displacement comes before y.
std::array<double, 64> element_stiffness(double nu);

// Rectangular mesh of nx-by-ny unit quads. Nodes are numbered down each
// column of constant x (id = ix*(ny+1) + iy) which keeps the stiffness
// bandwidth at the short mesh dimension; element order matches Grid2D.
struct FemProblem {
  int nx = 0;
  int ny = 0;
  Material mat;
  std::vector<std::uint8_t> fixed;  // per dof, 2*(nx+1)*(ny+1)
  std::vector<double> f;

  FemProblem() = default;
  FemProblem(int nx_, int ny_);

  int node_id(int ix, int iy) const { return ix * (ny + 1) + iy; }
  int ndof() const { return 2 * (nx + 1) * (ny + 1); }
  // Element dofs in stiffness order (bl, br, tr, tl) x (x, y).
  std::array<int, 8> element_dofs(int ex, int ey) const;
};

enum class Benchmark { tip_cantilever, ss_bottom, mid_cantilever };

Benchmark benchmark_from_string(const std::string& name);
std::string benchmark_name(Benchmark b);

// tip_cantilever: left edge clamped, unit downward tip load at the bottom
// right corner. ss_bottom: simply supported bottom edge (roller bottom left,
// pin bottom right), unit downward load on every bottom edge node.
// mid_cantilever: left edge clamped, unit downward load at the right edge
// node at mid height.
FemProblem build_benchmark(Benchmark b, int nx, int ny);

struct SolveResult {
  std::vector<double> u;  // full dof vector, zeros on fixed dofs
  double compliance = 0.0;
};

// Assembles the SIMP-scaled stiffness on the free dofs and solves by sparse
// Cholesky. Throws std::runtime_error if factorization fails or the
// residual exceeds 1e-8 * ||f||.
SolveResult assemble_and_solve(const FemProblem& prob, const Grid2D& rho);

// dC/drho per element for compliance C = f.u at fixed load, via the
// self-adjoint form: -penal * rho^(penal-1) * (E0-Emin) * ue.Ke0.ue.
// Every entry is <= 0.
Grid2D compliance_sensitivity(const FemProblem& prob, const Grid2D& rho,
                              const std::vector<double>& u);

}  // namespace latopt
