#include "latopt/neuralfield.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "latopt/kernels.hpp"

namespace latopt {

namespace {

inline double stable_sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void fill_uniform(std::vector<double>& w, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& x : w) x = dist(rng);
}

}  // namespace

FourierMap sample_frequencies(int m, double f_min, double f_max, std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("sample_frequencies: m must be positive");
  if (!(0.0 < f_min && f_min <= f_max))
    throw std::invalid_argument("sample_frequencies: need 0 < f_min <= f_max");
  FourierMap fm;
  fm.m = m;
  fm.B.resize(static_cast<std::size_t>(m) * 2);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(f_min, f_max);
  std::bernoulli_distribution flip(0.5);
  for (double& b : fm.B) {
    const double v = mag(rng);
    b = flip(rng) ? -v : v;
  }
  return fm;
}

std::vector<double> make_coordinate_grid(int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("make_coordinate_grid: dimensions must be positive");
  std::vector<double> coords(static_cast<std::size_t>(nx) * ny * 2);
  std::size_t k = 0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      coords[k++] = (ix + 0.5) / nx;
      coords[k++] = (iy + 0.5) / ny;
    }
  }
  return coords;
}

std::vector<double> fourier_map(const FourierMap& fm, const std::vector<double>& coords) {
  if (coords.size() % 2 != 0)
    throw std::invalid_argument("fourier_map: coords must be N x 2");
  const std::size_t n = coords.size() / 2;
  const int m = fm.m;
  std::vector<double> gamma(n * 2 * m);
  for (std::size_t e = 0; e < n; ++e) {
    const double x = coords[2 * e];
    const double y = coords[2 * e + 1];
    double* row = gamma.data() + e * 2 * m;
    for (int j = 0; j < m; ++j) {
      const double phase = 2.0 * M_PI * (fm.B[2 * j] * x + fm.B[2 * j + 1] * y);
      row[j] = std::sin(phase);
      row[m + j] = std::cos(phase);
    }
  }
  return gamma;
}

std::size_t DecoderWeights::param_count() const {
  return W1.size() + b1.size() + W2.size() + b2.size() + W3.size() + b3.size() +
         W4.size() + b4.size();
}

DecoderWeights init_decoder(int d_in, std::uint64_t seed) {
  if (d_in < 1) throw std::invalid_argument("init_decoder: input width must be positive");
  DecoderWeights w;
  w.d_in = d_in;
  std::mt19937_64 rng(seed);
  w.W1.resize(static_cast<std::size_t>(DecoderWeights::H1) * d_in);
  fill_uniform(w.W1, 1.0 / std::sqrt(static_cast<double>(d_in)), rng);
  w.b1.assign(DecoderWeights::H1, 0.0);
  w.W2.resize(static_cast<std::size_t>(DecoderWeights::H2) * DecoderWeights::H1);
  fill_uniform(w.W2, 1.0 / std::sqrt(static_cast<double>(DecoderWeights::H1)), rng);
  w.b2.assign(DecoderWeights::H2, 0.0);
  w.W3.resize(static_cast<std::size_t>(DecoderWeights::H3) * DecoderWeights::H2);
  fill_uniform(w.W3, 1.0 / std::sqrt(static_cast<double>(DecoderWeights::H2)), rng);
  w.b3.assign(DecoderWeights::H3, 0.0);
  w.W4.resize(DecoderWeights::H3);
  fill_uniform(w.W4, 1.0 / std::sqrt(static_cast<double>(DecoderWeights::H3)), rng);
  w.b4.assign(1, 0.0);
  return w;
}

Grid2D decode(const DecoderWeights& w, const std::vector<double>& z_p,
              const std::vector<double>& gamma, int nx, int ny,
              DecodeCache* cache) {
  constexpr int H1 = DecoderWeights::H1;
  constexpr int H2 = DecoderWeights::H2;
  constexpr int H3 = DecoderWeights::H3;
  const int d_z = static_cast<int>(z_p.size());
  const int two_m = w.d_in - d_z;
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  if (two_m <= 0)
    throw std::invalid_argument("decode: conditioning vector too wide for decoder");
  if (gamma.size() != n * static_cast<std::size_t>(two_m))
    throw std::invalid_argument("decode: gamma size does not match grid and decoder");

  // The conditioning block of layer 1 is identical for every cell, so
  // W1[:, :d_z] z_p + b1 is computed once and only the encoding block varies.
  std::vector<double> s1_shared(H1);
  kernels::matvec(w.W1.data(), w.d_in, z_p.data(), w.b1.data(), s1_shared.data(),
                  H1, d_z);

  Grid2D out(nx, ny);
  DecodeCache local;
  DecodeCache& c = cache ? *cache : local;
  c.n = static_cast<int>(n);
  c.z1.resize(n * H1);
  c.z2.resize(n * H2);
  c.z3.resize(n * H3);
  c.s4.resize(n);
  c.raw.resize(n);

  std::vector<double> a1(H1), a2(H2), a3(H3);
  for (std::size_t e = 0; e < n; ++e) {
    const double* g = gamma.data() + e * two_m;
    double* z1 = c.z1.data() + e * H1;
    double* z2 = c.z2.data() + e * H2;
    double* z3 = c.z3.data() + e * H3;

    kernels::matvec(w.W1.data() + d_z, w.d_in, g, s1_shared.data(), z1, H1, two_m);
    kernels::relu(z1, a1.data(), H1);
    kernels::matvec(w.W2.data(), H1, a1.data(), w.b2.data(), z2, H2, H1);
    kernels::relu(z2, a2.data(), H2);
    kernels::matvec(w.W3.data(), H2, a2.data(), w.b3.data(), z3, H3, H2);
    kernels::relu(z3, a3.data(), H3);
    const double s4 = kernels::dot(w.W4.data(), a3.data(), H3) + w.b4[0];
    c.s4[e] = s4;
    c.raw[e] = stable_sigmoid(s4);
    out.v[e] = c.raw[e];
  }
  return out;
}

Grid2D sharpen(const Grid2D& rho, double beta) {
  if (beta <= 0.0) throw std::invalid_argument("sharpen: beta must be positive");
  Grid2D out(rho.nx, rho.ny);
  for (std::size_t i = 0; i < rho.v.size(); ++i)
    out.v[i] = stable_sigmoid(beta * (rho.v[i] - 0.5));
  return out;
}

std::vector<double> sharpen_backward(const std::vector<double>& raw, double beta,
                                     const std::vector<double>& cot_beta) {
  if (raw.size() != cot_beta.size())
    throw std::invalid_argument("sharpen_backward: size mismatch");
  std::vector<double> cot_raw(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double s = stable_sigmoid(beta * (raw[i] - 0.5));
    cot_raw[i] = cot_beta[i] * beta * s * (1.0 - s);
  }
  return cot_raw;
}

DecoderGrad decode_backward_raw(const DecoderWeights& w, const DecodeCache& cache,
                                const std::vector<double>& z_p,
                                const std::vector<double>& gamma,
                                const std::vector<double>& cot_raw) {
  constexpr int H1 = DecoderWeights::H1;
  constexpr int H2 = DecoderWeights::H2;
  constexpr int H3 = DecoderWeights::H3;
  const int d_z = static_cast<int>(z_p.size());
  const int two_m = w.d_in - d_z;
  const std::size_t n = static_cast<std::size_t>(cache.n);
  if (cot_raw.size() != n)
    throw std::invalid_argument("decode_backward_raw: cotangent size mismatch");

  DecoderGrad g;
  g.dW1.assign(w.W1.size(), 0.0);
  g.db1.assign(w.b1.size(), 0.0);
  g.dW2.assign(w.W2.size(), 0.0);
  g.db2.assign(w.b2.size(), 0.0);
  g.dW3.assign(w.W3.size(), 0.0);
  g.db3.assign(w.b3.size(), 0.0);
  g.dW4.assign(w.W4.size(), 0.0);
  g.db4.assign(w.b4.size(), 0.0);
  g.dz_p.assign(d_z, 0.0);

  std::vector<double> a1(H1), a2(H2), a3(H3);
  std::vector<double> d3(H3), d2(H2), d1(H1), tmp3(H3), tmp2(H2), tmp1(H1);
  // Accumulating sum of d1 over cells lets the shared conditioning block be
  // finished with one rank-1 update after the loop.
  std::vector<double> d1_total(H1, 0.0);

  for (std::size_t e = 0; e < n; ++e) {
    const double* zc1 = cache.z1.data() + e * H1;
    const double* zc2 = cache.z2.data() + e * H2;
    const double* zc3 = cache.z3.data() + e * H3;
    kernels::relu(zc1, a1.data(), H1);
    kernels::relu(zc2, a2.data(), H2);
    kernels::relu(zc3, a3.data(), H3);

    const double raw = cache.raw[e];
    const double ds4 = cot_raw[e] * raw * (1.0 - raw);

    kernels::axpy(ds4, a3.data(), g.dW4.data(), H3);
    g.db4[0] += ds4;

    for (int i = 0; i < H3; ++i) tmp3[i] = ds4 * w.W4[i];
    kernels::relu_mask(zc3, tmp3.data(), d3.data(), H3);
    kernels::ger_acc(g.dW3.data(), H2, d3.data(), a2.data(), H3, H2);
    kernels::axpy(1.0, d3.data(), g.db3.data(), H3);

    std::fill(tmp2.begin(), tmp2.end(), 0.0);
    kernels::matvec_t_acc(w.W3.data(), H2, d3.data(), tmp2.data(), H3, H2);
    kernels::relu_mask(zc2, tmp2.data(), d2.data(), H2);
    kernels::ger_acc(g.dW2.data(), H1, d2.data(), a1.data(), H2, H1);
    kernels::axpy(1.0, d2.data(), g.db2.data(), H2);

    std::fill(tmp1.begin(), tmp1.end(), 0.0);
    kernels::matvec_t_acc(w.W2.data(), H1, d2.data(), tmp1.data(), H2, H1);
    kernels::relu_mask(zc1, tmp1.data(), d1.data(), H1);
    // Encoding columns of W1 get their per-cell rank-1 update here; the
    // conditioning columns use the accumulated d1 after the loop.
    kernels::ger_acc(g.dW1.data() + d_z, w.d_in, d1.data(),
                     gamma.data() + e * two_m, H1, two_m);
    kernels::axpy(1.0, d1.data(), g.db1.data(), H1);
    kernels::axpy(1.0, d1.data(), d1_total.data(), H1);
  }

  kernels::ger_acc(g.dW1.data(), w.d_in, d1_total.data(), z_p.data(), H1, d_z);
  kernels::matvec_t_acc(w.W1.data(), w.d_in, d1_total.data(), g.dz_p.data(), H1, d_z);
  return g;
}

DecoderGrad decode_backward(const DecoderWeights& w, const DecodeCache& cache,
                            const std::vector<double>& z_p,
                            const std::vector<double>& gamma, double beta,
                            const std::vector<double>& cot_beta) {
  const std::vector<double> cot_raw = sharpen_backward(cache.raw, beta, cot_beta);
  return decode_backward_raw(w, cache, z_p, gamma, cot_raw);
}

}  // namespace latopt
