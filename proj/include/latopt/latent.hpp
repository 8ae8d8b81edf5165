#pragma once

#include <cstdint>
#include <vector>

namespace latopt {

// Classical stand-in for the circuit readout: d entries ~ N(0,1), seeded.
// Dimension matches the circuit readout (3 per qubit) so the projection
// layer is identical in both encodings.
std::vector<double> init_classical(int d, std::uint64_t seed);

// Learnable affine lift z_p = W z + b from the low-dimensional latent to the
// decoder conditioning vector. W is d_out x d_in row-major, b has d_out
// entries (zero-initialized); W entries start uniform in
// [-1/sqrt(d_in), 1/sqrt(d_in)].
struct ProjectionLayer {
  int d_in = 0;
  int d_out = 0;
  std::vector<double> W;
  std::vector<double> b;

  ProjectionLayer() = default;
  ProjectionLayer(int d_out_, int d_in_, std::uint64_t seed);

  std::vector<double> forward(const std::vector<double>& z) const;
};

struct ProjectionGrad {
  std::vector<double> dW;
  std::vector<double> db;
  std::vector<double> dz;
};

// Reverse-mode step for the affine map: given d(loss)/d(z_p), returns
// dW = cot (x) z, db = cot, dz = W^T cot.
ProjectionGrad project_backward(const ProjectionLayer& p,
                                const std::vector<double>& z,
                                const std::vector<double>& cot);

}  // namespace latopt
