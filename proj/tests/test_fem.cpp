#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "latopt/fem.hpp"
#include "latopt/gradcheck.hpp"
#include "latopt/grid.hpp"

namespace {

using namespace latopt;

// Element stiffness integrated the long way round: 4-point Gauss per axis
// instead of 2, shape derivatives written in corner-sign form instead of
// expanded per node. The integrand is quadratic per axis, so both rules are
// exact and any disagreement beyond rounding is a bug.
std::array<double, 64> oracle_element_stiffness(double nu) {
  const double r30 = std::sqrt(30.0);
  const double inner = std::sqrt((3.0 - 2.0 * std::sqrt(1.2)) / 7.0);
  const double outer = std::sqrt((3.0 + 2.0 * std::sqrt(1.2)) / 7.0);
  const double pts[4] = {-outer, -inner, inner, outer};
  const double wts[4] = {(18.0 - r30) / 36.0, (18.0 + r30) / 36.0,
                         (18.0 + r30) / 36.0, (18.0 - r30) / 36.0};
  const double xs[4] = {-1.0, 1.0, 1.0, -1.0};  // corner signs, bl br tr tl
  const double ys[4] = {-1.0, -1.0, 1.0, 1.0};
  const double c = 1.0 / (1.0 - nu * nu);
  const double D[3][3] = {{c, nu * c, 0.0}, {nu * c, c, 0.0}, {0.0, 0.0, 0.5 / (1.0 + nu)}};

  std::array<double, 64> K{};
  for (int gx = 0; gx < 4; ++gx) {
    for (int gy = 0; gy < 4; ++gy) {
      const double xi = pts[gx];
      const double eta = pts[gy];
      double B[3][8] = {};
      for (int a = 0; a < 4; ++a) {
        const double dx = 2.0 * xs[a] * (1.0 + ys[a] * eta) / 4.0;
        const double dy = 2.0 * ys[a] * (1.0 + xs[a] * xi) / 4.0;
        B[0][2 * a] = dx;
        B[1][2 * a + 1] = dy;
        B[2][2 * a] = dy;
        B[2][2 * a + 1] = dx;
      }
      const double w = wts[gx] * wts[gy] * 0.25;
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          double acc = 0.0;
          for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) acc += B[r][i] * D[r][s] * B[s][j];
          K[i * 8 + j] += acc * w;
        }
    }
  }
  return K;
}

// Dense assembly on the free dofs plus Gaussian elimination with partial
// pivoting. Only fit for toy meshes, which is the point: no sparse machinery
// shared with the code under test.
double oracle_compliance_dense(const FemProblem& p, const Grid2D& rho) {
  const int ndof = p.ndof();
  std::vector<int> red(ndof, -1);
  int nfree = 0;
  for (int d = 0; d < ndof; ++d)
    if (!p.fixed[d]) red[d] = nfree++;

  const std::array<double, 64> Ke = oracle_element_stiffness(p.mat.nu);
  std::vector<double> A(static_cast<std::size_t>(nfree) * nfree, 0.0);
  for (int ey = 0; ey < p.ny; ++ey)
    for (int ex = 0; ex < p.nx; ++ex) {
      const double r = rho.at(ex, ey);
      const double Ee = p.mat.Emin + std::pow(r, p.mat.penal) * (p.mat.E0 - p.mat.Emin);
      const std::array<int, 8> dofs = p.element_dofs(ex, ey);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          if (red[dofs[i]] >= 0 && red[dofs[j]] >= 0)
            A[static_cast<std::size_t>(red[dofs[i]]) * nfree + red[dofs[j]]] +=
                Ee * Ke[i * 8 + j];
    }

  std::vector<double> b(nfree, 0.0);
  for (int d = 0; d < ndof; ++d)
    if (red[d] >= 0) b[red[d]] = p.f[d];
  const std::vector<double> f_free = b;

  for (int col = 0; col < nfree; ++col) {
    int piv = col;
    for (int r = col + 1; r < nfree; ++r)
      if (std::abs(A[static_cast<std::size_t>(r) * nfree + col]) >
          std::abs(A[static_cast<std::size_t>(piv) * nfree + col]))
        piv = r;
    if (piv != col) {
      for (int c2 = 0; c2 < nfree; ++c2)
        std::swap(A[static_cast<std::size_t>(col) * nfree + c2],
                  A[static_cast<std::size_t>(piv) * nfree + c2]);
      std::swap(b[col], b[piv]);
    }
    const double d = A[static_cast<std::size_t>(col) * nfree + col];
    for (int r = col + 1; r < nfree; ++r) {
      const double m = A[static_cast<std::size_t>(r) * nfree + col] / d;
      if (m == 0.0) continue;
      for (int c2 = col; c2 < nfree; ++c2)
        A[static_cast<std::size_t>(r) * nfree + c2] -=
            m * A[static_cast<std::size_t>(col) * nfree + c2];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> u(nfree, 0.0);
  for (int r = nfree - 1; r >= 0; --r) {
    double s = b[r];
    for (int c2 = r + 1; c2 < nfree; ++c2)
      s -= A[static_cast<std::size_t>(r) * nfree + c2] * u[c2];
    u[r] = s / A[static_cast<std::size_t>(r) * nfree + r];
  }

  double comp = 0.0;
  for (int r = 0; r < nfree; ++r) comp += f_free[r] * u[r];
  return comp;
}

// Band-stored Cholesky on the free dofs, sized for the production meshes.
// The column-major node numbering keeps the half bandwidth near 2*(ny+2).
double oracle_compliance_banded(const FemProblem& p, const Grid2D& rho) {
  const int ndof = p.ndof();
  std::vector<int> red(ndof, -1);
  int nfree = 0;
  for (int d = 0; d < ndof; ++d)
    if (!p.fixed[d]) red[d] = nfree++;

  int hbw = 0;
  for (int ey = 0; ey < p.ny; ++ey)
    for (int ex = 0; ex < p.nx; ++ex) {
      const std::array<int, 8> dofs = p.element_dofs(ex, ey);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          if (red[dofs[i]] >= 0 && red[dofs[j]] >= 0)
            hbw = std::max(hbw, std::abs(red[dofs[i]] - red[dofs[j]]));
    }

  const int stride = hbw + 1;
  auto idx = [&](int i, int j) {  // lower triangle, 0 <= i-j <= hbw
    return static_cast<std::size_t>(i) * stride + (i - j);
  };
  std::vector<double> band(static_cast<std::size_t>(nfree) * stride, 0.0);
  const std::array<double, 64> Ke = oracle_element_stiffness(p.mat.nu);
  for (int ey = 0; ey < p.ny; ++ey)
    for (int ex = 0; ex < p.nx; ++ex) {
      const double r = rho.at(ex, ey);
      const double Ee = p.mat.Emin + std::pow(r, p.mat.penal) * (p.mat.E0 - p.mat.Emin);
      const std::array<int, 8> dofs = p.element_dofs(ex, ey);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          const int ri = red[dofs[i]];
          const int rj = red[dofs[j]];
          if (ri >= 0 && rj >= 0 && rj <= ri) band[idx(ri, rj)] += Ee * Ke[i * 8 + j];
        }
    }

  for (int i = 0; i < nfree; ++i) {
    const int j0 = std::max(0, i - hbw);
    for (int j = j0; j <= i; ++j) {
      double s = band[idx(i, j)];
      for (int k = std::max(j0, j - hbw); k < j; ++k) s -= band[idx(i, k)] * band[idx(j, k)];
      if (j < i) {
        band[idx(i, j)] = s / band[idx(j, j)];
      } else {
        REQUIRE(s > 0.0);  // the reduced stiffness must stay positive definite
        band[idx(i, i)] = std::sqrt(s);
      }
    }
  }

  std::vector<double> f_free(nfree, 0.0);
  for (int d = 0; d < ndof; ++d)
    if (red[d] >= 0) f_free[red[d]] = p.f[d];

  std::vector<double> y(nfree, 0.0);
  for (int i = 0; i < nfree; ++i) {
    double s = f_free[i];
    for (int j = std::max(0, i - hbw); j < i; ++j) s -= band[idx(i, j)] * y[j];
    y[i] = s / band[idx(i, i)];
  }
  std::vector<double> u(nfree, 0.0);
  for (int i = nfree - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j <= std::min(nfree - 1, i + hbw); ++j)
      s -= band[idx(j, i)] * u[j];
    u[i] = s / band[idx(i, i)];
  }

  double comp = 0.0;
  for (int i = 0; i < nfree; ++i) comp += f_free[i] * u[i];
  return comp;
}

Grid2D random_density(int nx, int ny, std::uint64_t seed, double lo = 0.2, double hi = 1.0) {
  Grid2D g(nx, ny);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  for (double& v : g.v) v = d(rng);
  return g;
}

}  // namespace

TEST_SUITE("fem") {

TEST_CASE("material interpolation hits both ends and rejects bad densities") {
  const Material mat;
  CHECK(simp_modulus(1.0, mat) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(simp_modulus(0.0, mat) == doctest::Approx(1e-9).epsilon(1e-15));
  CHECK(simp_modulus(0.5, mat) ==
        doctest::Approx(1e-9 + 0.125 * (1.0 - 1e-9)).epsilon(1e-15));
  CHECK_THROWS_AS(simp_modulus(-0.01, mat), std::domain_error);
  CHECK_THROWS_AS(simp_modulus(1.01, mat), std::domain_error);
  CHECK_THROWS_AS(simp_modulus(std::numeric_limits<double>::quiet_NaN(), mat),
                  std::domain_error);
}

TEST_CASE("element stiffness: corner entry, symmetry, rigid modes") {
  const std::array<double, 64> K = element_stiffness(0.3);
  CHECK(std::abs(K[0] - 0.494505494505495) <= 1e-12);
  CHECK(std::abs(K[0] - (0.5 - 0.3 / 6.0) / 0.91) <= 1e-12);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(std::abs(K[i * 8 + j] - K[j * 8 + i]) <= 1e-14);

  const double tx[8] = {1, 0, 1, 0, 1, 0, 1, 0};
  const double ty[8] = {0, 1, 0, 1, 0, 1, 0, 1};
  for (int i = 0; i < 8; ++i) {
    double sx = 0.0, sy = 0.0;
    for (int j = 0; j < 8; ++j) {
      sx += K[i * 8 + j] * tx[j];
      sy += K[i * 8 + j] * ty[j];
    }
    CHECK(std::abs(sx) <= 1e-12);
    CHECK(std::abs(sy) <= 1e-12);
  }
}

TEST_CASE("element stiffness agrees with a higher-order quadrature oracle") {
  for (double nu : {0.3, 0.45}) {
    const std::array<double, 64> K = element_stiffness(nu);
    const std::array<double, 64> R = oracle_element_stiffness(nu);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(K[i] - R[i]) <= 1e-12);
  }
}

TEST_CASE("mesh numbering runs down columns and element dofs follow it") {
  const FemProblem p(2, 2);
  CHECK(p.ndof() == 18);
  CHECK(p.node_id(0, 0) == 0);
  CHECK(p.node_id(0, 2) == 2);
  CHECK(p.node_id(1, 0) == 3);
  CHECK(p.node_id(2, 2) == 8);
  const std::array<int, 8> d = p.element_dofs(0, 0);
  const std::array<int, 8> want = {0, 1, 6, 7, 8, 9, 2, 3};
  CHECK(d == want);
  CHECK_THROWS_AS(FemProblem(0, 3), std::invalid_argument);
}

TEST_CASE("benchmark boundary conditions have the advertised shape") {
  const FemProblem tip = build_benchmark(Benchmark::tip_cantilever, 60, 30);
  int nfix = 0, nload = 0;
  for (int d = 0; d < tip.ndof(); ++d) {
    nfix += tip.fixed[d];
    nload += tip.f[d] != 0.0;
  }
  CHECK(nfix == 62);
  CHECK(nload == 1);
  CHECK(tip.f[2 * tip.node_id(60, 0) + 1] == -1.0);

  const FemProblem ss = build_benchmark(Benchmark::ss_bottom, 60, 30);
  nfix = nload = 0;
  for (int d = 0; d < ss.ndof(); ++d) {
    nfix += ss.fixed[d];
    nload += ss.f[d] != 0.0;
  }
  CHECK(nfix == 3);
  CHECK(ss.fixed[2 * ss.node_id(0, 0) + 1] == 1);
  CHECK(ss.fixed[2 * ss.node_id(60, 0)] == 1);
  CHECK(ss.fixed[2 * ss.node_id(60, 0) + 1] == 1);
  CHECK(nload == 61);
  for (int ix = 0; ix <= 60; ++ix) CHECK(ss.f[2 * ss.node_id(ix, 0) + 1] == -1.0);

  const FemProblem mid = build_benchmark(Benchmark::mid_cantilever, 60, 30);
  nfix = nload = 0;
  for (int d = 0; d < mid.ndof(); ++d) {
    nfix += mid.fixed[d];
    nload += mid.f[d] != 0.0;
  }
  CHECK(nfix == 62);
  CHECK(nload == 1);
  CHECK(mid.f[2 * mid.node_id(60, 15) + 1] == -1.0);

  CHECK(benchmark_from_string("ss_bottom") == Benchmark::ss_bottom);
  CHECK(benchmark_name(Benchmark::mid_cantilever) == "mid_cantilever");
  CHECK_THROWS_AS(benchmark_from_string("bridge"), std::invalid_argument);
}

TEST_CASE("single-element cantilever matches a dense reduced solve") {
  const FemProblem p = build_benchmark(Benchmark::tip_cantilever, 1, 1);
  Grid2D rho(1, 1);
  rho.v = {0.8};
  const SolveResult res = assemble_and_solve(p, rho);
  const double want = oracle_compliance_dense(p, rho);
  CHECK(res.compliance == doctest::Approx(want).epsilon(1e-10));
  CHECK(res.compliance > 0.0);
  // clamped edge stays put
  CHECK(res.u[0] == 0.0);
  CHECK(res.u[2 * p.node_id(0, 1)] == 0.0);
}

TEST_CASE("small meshes match the dense oracle on random densities") {
  {
    const FemProblem p = build_benchmark(Benchmark::tip_cantilever, 3, 2);
    const Grid2D rho = random_density(3, 2, 401);
    CHECK(assemble_and_solve(p, rho).compliance ==
          doctest::Approx(oracle_compliance_dense(p, rho)).epsilon(1e-10));
  }
  {
    const FemProblem p = build_benchmark(Benchmark::ss_bottom, 4, 2);
    const Grid2D rho = random_density(4, 2, 402);
    CHECK(assemble_and_solve(p, rho).compliance ==
          doctest::Approx(oracle_compliance_dense(p, rho)).epsilon(1e-10));
  }
  {
    const FemProblem p = build_benchmark(Benchmark::mid_cantilever, 3, 4);
    const Grid2D rho = random_density(3, 4, 403);
    CHECK(assemble_and_solve(p, rho).compliance ==
          doctest::Approx(oracle_compliance_dense(p, rho)).epsilon(1e-10));
  }
}

TEST_CASE("production-size solves match an independent banded Cholesky") {
  {
    const FemProblem p = build_benchmark(Benchmark::tip_cantilever, 60, 30);
    Grid2D solid(60, 30);
    for (double& v : solid.v) v = 1.0;
    const double got = assemble_and_solve(p, solid).compliance;
    const double want = oracle_compliance_banded(p, solid);
    CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
  }
  {
    const FemProblem p = build_benchmark(Benchmark::mid_cantilever, 20, 10);
    const Grid2D rho = random_density(20, 10, 404);
    const double got = assemble_and_solve(p, rho).compliance;
    const double want = oracle_compliance_banded(p, rho);
    CHECK(std::abs(got - want) <= 1e-8 * std::abs(want));
  }
}

TEST_CASE("load scaling is quadratic in compliance and fixed-dof loads are inert") {
  FemProblem p = build_benchmark(Benchmark::tip_cantilever, 4, 2);
  const Grid2D rho = random_density(4, 2, 405);
  const double c1 = assemble_and_solve(p, rho).compliance;

  FemProblem scaled = p;
  for (double& v : scaled.f) v *= 3.0;
  CHECK(assemble_and_solve(scaled, rho).compliance ==
        doctest::Approx(9.0 * c1).epsilon(1e-9));

  FemProblem poked = p;
  poked.f[0] = 17.0;  // dof 0 is on the clamped edge
  CHECK(poked.fixed[0] == 1);
  CHECK(assemble_and_solve(poked, rho).compliance == c1);
}

TEST_CASE("unloaded problem gives zero displacement and zero sensitivity") {
  FemProblem p = build_benchmark(Benchmark::tip_cantilever, 3, 3);
  std::fill(p.f.begin(), p.f.end(), 0.0);
  const Grid2D rho = random_density(3, 3, 406);
  const SolveResult res = assemble_and_solve(p, rho);
  CHECK(res.compliance == 0.0);
  for (double v : res.u) CHECK(v == 0.0);
  const Grid2D g = compliance_sensitivity(p, rho, res.u);
  for (double v : g.v) CHECK(v == 0.0);
}

TEST_CASE("compliance sensitivities are nonpositive and match finite differences") {
  const FemProblem p = build_benchmark(Benchmark::tip_cantilever, 4, 2);
  const Grid2D rho = random_density(4, 2, 407);
  const SolveResult res = assemble_and_solve(p, rho);
  const Grid2D g = compliance_sensitivity(p, rho, res.u);
  for (double v : g.v) CHECK(v <= 0.0);

  const FemSensitivityCheck chk = check_fem_sensitivity(11);
  CHECK(chk.max_rel_err <= 1e-4);
  CHECK(chk.all_nonpositive);
}

TEST_CASE("shape mismatches are rejected up front") {
  const FemProblem p = build_benchmark(Benchmark::tip_cantilever, 3, 2);
  CHECK_THROWS_AS(assemble_and_solve(p, Grid2D(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(compliance_sensitivity(p, Grid2D(3, 2), std::vector<double>(5, 0.0)),
                  std::invalid_argument);
}

}  // TEST_SUITE
