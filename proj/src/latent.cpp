#include "latopt/latent.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "latopt/kernels.hpp"

namespace latopt {

std::vector<double> init_classical(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("init_classical: dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> z(d);
  for (double& x : z) x = dist(rng);
  return z;
}

ProjectionLayer::ProjectionLayer(int d_out_, int d_in_, std::uint64_t seed)
    : d_in(d_in_), d_out(d_out_) {
  if (d_in_ < 1 || d_out_ < 1)
    throw std::invalid_argument("ProjectionLayer: dimensions must be positive");
  if (d_out_ <= d_in_)
    throw std::invalid_argument("ProjectionLayer: output must be wider than input");
  const double bound = 1.0 / std::sqrt(static_cast<double>(d_in_));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-bound, bound);
  W.resize(static_cast<std::size_t>(d_out_) * d_in_);
  for (double& w : W) w = dist(rng);
  b.assign(d_out_, 0.0);
}

std::vector<double> ProjectionLayer::forward(const std::vector<double>& z) const {
  if (z.size() != static_cast<std::size_t>(d_in))
    throw std::invalid_argument("ProjectionLayer::forward: latent size mismatch");
  std::vector<double> out(d_out);
  kernels::matvec(W.data(), d_in, z.data(), b.data(), out.data(), d_out, d_in);
  return out;
}

ProjectionGrad project_backward(const ProjectionLayer& p,
                                const std::vector<double>& z,
                                const std::vector<double>& cot) {
  if (z.size() != static_cast<std::size_t>(p.d_in) ||
      cot.size() != static_cast<std::size_t>(p.d_out))
    throw std::invalid_argument("project_backward: size mismatch");
  ProjectionGrad g;
  g.dW.assign(p.W.size(), 0.0);
  g.db = cot;
  g.dz.assign(p.d_in, 0.0);
  kernels::ger_acc(g.dW.data(), p.d_in, cot.data(), z.data(), p.d_out, p.d_in);
  kernels::matvec_t_acc(p.W.data(), p.d_in, cot.data(), g.dz.data(), p.d_out, p.d_in);
  return g;
}

}  // namespace latopt
