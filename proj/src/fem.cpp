#include "latopt/fem.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace latopt {

double simp_modulus(double rho, const Material& mat) {
  if (!std::isfinite(rho) || rho < 0.0 || rho > 1.0)
    throw std::domain_error("simp_modulus: density must be finite and in [0,1]");
  return mat.Emin + std::pow(rho, mat.penal) * (mat.E0 - mat.Emin);
}

std::array<double, 64> element_stiffness(double nu) {
  // Unit square mapped from the reference element: x = (xi+1)/2, so both
  // derivative scalings are 2 and the Jacobian determinant is 1/4.
  const double D[3][3] = {
      {1.0 / (1.0 - nu * nu), nu / (1.0 - nu * nu), 0.0},
      {nu / (1.0 - nu * nu), 1.0 / (1.0 - nu * nu), 0.0},
      {0.0, 0.0, 0.5 / (1.0 + nu)},
  };
  std::array<double, 64> K{};
  const double gp = 1.0 / std::sqrt(3.0);
  for (double xi : {-gp, gp}) {
    for (double eta : {-gp, gp}) {
      // dN/dxi, dN/deta for nodes bl, br, tr, tl
      const double dxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
      const double deta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
      double B[3][8] = {};
      for (int a = 0; a < 4; ++a) {
        const double dx = 2.0 * dxi[a];
        const double dy = 2.0 * deta[a];
        B[0][2 * a] = dx;
        B[1][2 * a + 1] = dy;
        B[2][2 * a] = dy;
        B[2][2 * a + 1] = dx;
      }
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
          double acc = 0.0;
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) acc += B[r][i] * D[r][c] * B[c][j];
          K[i * 8 + j] += acc * 0.25;  // det(J) * unit Gauss weight
        }
      }
    }
  }
  return K;
}

FemProblem::FemProblem(int nx_, int ny_) : nx(nx_), ny(ny_) {
  if (nx_ < 1 || ny_ < 1)
    throw std::invalid_argument("FemProblem: mesh dimensions must be positive");
  fixed.assign(ndof(), 0);
  f.assign(ndof(), 0.0);
}

std::array<int, 8> FemProblem::element_dofs(int ex, int ey) const {
  const int bl = node_id(ex, ey);
  const int br = node_id(ex + 1, ey);
  const int tr = node_id(ex + 1, ey + 1);
  const int tl = node_id(ex, ey + 1);
  return {2 * bl, 2 * bl + 1, 2 * br, 2 * br + 1,
          2 * tr, 2 * tr + 1, 2 * tl, 2 * tl + 1};
}

Benchmark benchmark_from_string(const std::string& name) {
  if (name == "tip_cantilever") return Benchmark::tip_cantilever;
  if (name == "ss_bottom") return Benchmark::ss_bottom;
  if (name == "mid_cantilever") return Benchmark::mid_cantilever;
  throw std::invalid_argument("unknown benchmark: " + name);
}

std::string benchmark_name(Benchmark b) {
  switch (b) {
    case Benchmark::tip_cantilever: return "tip_cantilever";
    case Benchmark::ss_bottom: return "ss_bottom";
    case Benchmark::mid_cantilever: return "mid_cantilever";
  }
  throw std::logic_error("benchmark_name: bad enum");
}

FemProblem build_benchmark(Benchmark b, int nx, int ny) {
  FemProblem p(nx, ny);
  switch (b) {
    case Benchmark::tip_cantilever:
      for (int iy = 0; iy <= ny; ++iy) {
        const int n = p.node_id(0, iy);
        p.fixed[2 * n] = p.fixed[2 * n + 1] = 1;
      }
      p.f[2 * p.node_id(nx, 0) + 1] = -1.0;
      break;
    case Benchmark::ss_bottom:
      // Roller at bottom left (vertical only), pin at bottom right. The
      // distributed load covers all bottom nodes including the supports;
      // entries on fixed dofs are inert once those dofs are eliminated.
      p.fixed[2 * p.node_id(0, 0) + 1] = 1;
      p.fixed[2 * p.node_id(nx, 0)] = 1;
      p.fixed[2 * p.node_id(nx, 0) + 1] = 1;
      for (int ix = 0; ix <= nx; ++ix) p.f[2 * p.node_id(ix, 0) + 1] = -1.0;
      break;
    case Benchmark::mid_cantilever:
      for (int iy = 0; iy <= ny; ++iy) {
        const int n = p.node_id(0, iy);
        p.fixed[2 * n] = p.fixed[2 * n + 1] = 1;
      }
      p.f[2 * p.node_id(nx, ny / 2) + 1] = -1.0;
      break;
  }
  return p;
}

SolveResult assemble_and_solve(const FemProblem& prob, const Grid2D& rho) {
  if (rho.nx != prob.nx || rho.ny != prob.ny)
    throw std::invalid_argument("assemble_and_solve: density grid does not match mesh");
  const int ndof = prob.ndof();

  std::vector<int> reduced(ndof, -1);
  int nfree = 0;
  for (int d = 0; d < ndof; ++d)
    if (!prob.fixed[d]) reduced[d] = nfree++;
  if (nfree == 0) throw std::invalid_argument("assemble_and_solve: all dofs fixed");

  const std::array<double, 64> Ke = element_stiffness(prob.mat.nu);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(prob.nx) * prob.ny * 64);
  for (int ey = 0; ey < prob.ny; ++ey) {
    for (int ex = 0; ex < prob.nx; ++ex) {
      const double Ee = simp_modulus(rho.at(ex, ey), prob.mat);
      const std::array<int, 8> dofs = prob.element_dofs(ex, ey);
      for (int i = 0; i < 8; ++i) {
        const int ri = reduced[dofs[i]];
        if (ri < 0) continue;
        for (int j = 0; j < 8; ++j) {
          const int rj = reduced[dofs[j]];
          if (rj >= 0) trip.emplace_back(ri, rj, Ee * Ke[i * 8 + j]);
        }
      }
    }
  }

  Eigen::SparseMatrix<double> K(nfree, nfree);
  K.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd fr(nfree);
  for (int d = 0; d < ndof; ++d)
    if (reduced[d] >= 0) fr[reduced[d]] = prob.f[d];

  SolveResult res;
  res.u.assign(ndof, 0.0);
  const double fnorm = fr.norm();
  if (fnorm == 0.0) return res;  // unloaded problem, u = 0, C = 0

  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(K);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("assemble_and_solve: factorization failed");
  Eigen::VectorXd ur = solver.solve(fr);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("assemble_and_solve: back substitution failed");

  const double resid = (K * ur - fr).norm();
  if (!(resid <= 1e-8 * fnorm))
    throw std::runtime_error("assemble_and_solve: residual " + std::to_string(resid) +
                             " exceeds bound");

  for (int d = 0; d < ndof; ++d)
    if (reduced[d] >= 0) res.u[d] = ur[reduced[d]];
  res.compliance = fr.dot(ur);
  return res;
}

Grid2D compliance_sensitivity(const FemProblem& prob, const Grid2D& rho,
                              const std::vector<double>& u) {
  if (rho.nx != prob.nx || rho.ny != prob.ny)
    throw std::invalid_argument("compliance_sensitivity: density grid does not match mesh");
  if (u.size() != static_cast<std::size_t>(prob.ndof()))
    throw std::invalid_argument("compliance_sensitivity: displacement size mismatch");
  const std::array<double, 64> Ke = element_stiffness(prob.mat.nu);
  Grid2D g(prob.nx, prob.ny);
  for (int ey = 0; ey < prob.ny; ++ey) {
    for (int ex = 0; ex < prob.nx; ++ex) {
      const std::array<int, 8> dofs = prob.element_dofs(ex, ey);
      double ue[8];
      for (int i = 0; i < 8; ++i) ue[i] = u[dofs[i]];
      double s = 0.0;
      for (int i = 0; i < 8; ++i) {
        double row = 0.0;
        for (int j = 0; j < 8; ++j) row += Ke[i * 8 + j] * ue[j];
        s += ue[i] * row;
      }
      const double r = rho.at(ex, ey);
      g.at(ex, ey) = -prob.mat.penal * std::pow(r, prob.mat.penal - 1.0) *
                     (prob.mat.E0 - prob.mat.Emin) * s;
    }
  }
  return g;
}

}  // namespace latopt
