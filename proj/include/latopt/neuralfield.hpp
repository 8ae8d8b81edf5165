#pragma once

#include <cstdint>
#include <vector>

#include "latopt/grid.hpp"

namespace latopt {

// Fixed random frequency bank for the coordinate encoding, m rows of 2.
// Entry magnitudes are uniform in [f_min, f_max] with random sign; the bank
// is drawn once per run and never trained.
struct FourierMap {
  int m = 0;
  std::vector<double> B;  // m x 2 row-major
};

FourierMap sample_frequencies(int m, double f_min, double f_max, std::uint64_t seed);

// Cell-center coordinates in the unit square, N x 2 row-major, cell order
// matching Grid2D (iy*nx + ix).
std::vector<double> make_coordinate_grid(int nx, int ny);

// gamma(x) = [sin(2 pi B x), cos(2 pi B x)] per point: N x 2m row-major.
std::vector<double> fourier_map(const FourierMap& fm, const std::vector<double>& coords);

// Four dense layers (d_in -> 64 -> 128 -> 64 -> 1), relu between hidden
// layers, sigmoid on the scalar output. d_in = conditioning width + 2m.
struct DecoderWeights {
  static constexpr int H1 = 64;
  static constexpr int H2 = 128;
  static constexpr int H3 = 64;

  int d_in = 0;
  std::vector<double> W1, b1;  // H1 x d_in
  std::vector<double> W2, b2;  // H2 x H1
  std::vector<double> W3, b3;  // H3 x H2
  std::vector<double> W4, b4;  // 1 x H3

  std::size_t param_count() const;
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer, biases 0.
DecoderWeights init_decoder(int d_in, std::uint64_t seed);

// Pre-activations kept from the forward pass; backward recomputes the cheap
// relu outputs from these instead of storing both.
struct DecodeCache {
  int n = 0;
  std::vector<double> z1, z2, z3;  // n x H1, n x H2, n x H3
  std::vector<double> s4;          // n
  std::vector<double> raw;         // n, sigmoid output
};

// Evaluates the decoder at every cell. z_p is broadcast to all points and
// concatenated with the per-point encoding row of gamma. The returned field
// is the raw sigmoid output in (0,1).
Grid2D decode(const DecoderWeights& w, const std::vector<double>& z_p,
              const std::vector<double>& gamma, int nx, int ny,
              DecodeCache* cache = nullptr);

// Logistic sharpening rho_beta = sigmoid(beta * (rho - 1/2)).
Grid2D sharpen(const Grid2D& rho, double beta);

// Maps d(loss)/d(rho_beta) back to d(loss)/d(rho) using the cached raw field.
std::vector<double> sharpen_backward(const std::vector<double>& raw, double beta,
                                     const std::vector<double>& cot_beta);

struct DecoderGrad {
  std::vector<double> dW1, db1, dW2, db2, dW3, db3, dW4, db4;
  std::vector<double> dz_p;
};

// Reverse pass through the four layers given d(loss)/d(raw output). The
// gamma block of the input gradient is discarded (frequencies are fixed);
// the conditioning block is accumulated over all points into dz_p.
DecoderGrad decode_backward_raw(const DecoderWeights& w, const DecodeCache& cache,
                                const std::vector<double>& z_p,
                                const std::vector<double>& gamma,
                                const std::vector<double>& cot_raw);

// Same, but starting from d(loss)/d(rho_beta): applies the sharpening
// derivative first, then the layer reversal.
DecoderGrad decode_backward(const DecoderWeights& w, const DecodeCache& cache,
                            const std::vector<double>& z_p,
                            const std::vector<double>& gamma, double beta,
                            const std::vector<double>& cot_beta);

}  // namespace latopt
