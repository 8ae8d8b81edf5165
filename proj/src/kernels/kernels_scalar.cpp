#include "latopt/kernels.hpp"

// Reference kernels. Plain loops, no tricks; these define the semantics the
// vector backends must reproduce.
namespace latopt::kernels {
namespace {

void s_matvec(const double* W, std::size_t lda, const double* x, const double* b,
              double* y, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* w = W + r * lda;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += w[c] * x[c];
    y[r] = b ? acc + b[r] : acc;
  }
}

void s_matvec_t_acc(const double* W, std::size_t lda, const double* g,
                    double* acc, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* w = W + r * lda;
    const double gr = g[r];
    for (std::size_t c = 0; c < cols; ++c) acc[c] += gr * w[c];
  }
}

void s_ger_acc(double* W, std::size_t lda, const double* g, const double* x,
               std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    double* w = W + r * lda;
    const double gr = g[r];
    for (std::size_t c = 0; c < cols; ++c) w[c] += gr * x[c];
  }
}

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_relu(const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void s_relu_mask(const double* pre, const double* g, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = pre[i] > 0.0 ? g[i] : 0.0;
}

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

}  // namespace

const Table detail::scalar_table = {
    s_matvec, s_matvec_t_acc, s_ger_acc, s_dot, s_axpy, s_relu, s_relu_mask, s_sum,
};

}  // namespace latopt::kernels
