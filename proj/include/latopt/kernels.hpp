#pragma once

#include <cstddef>
#include <string>

// Low-level dense kernels used by the projection and decoder hot loops.
// Every kernel has a scalar reference implementation and, on x86-64 with
// AVX2+FMA, a vectorized variant. The active backend is resolved once at
// startup (cpuid), can be forced with the LATOPT_KERNELS environment
// variable (scalar|avx2), and can be switched programmatically for
// equivalence tests. Within one backend the accumulation order is fixed,
// so results are deterministic for a given build and backend.
namespace latopt::kernels {

enum class Backend { scalar, avx2 };

Backend active_backend();
void set_backend(Backend b);          // throws std::invalid_argument if unsupported
bool backend_supported(Backend b);
std::string backend_name(Backend b);

// y = W x + b, W row-major (rows x cols), lda = distance between rows.
// b may be null (treated as zero).
void matvec(const double* W, std::size_t lda, const double* x, const double* b,
            double* y, std::size_t rows, std::size_t cols);

// acc += W^T g, same layout as matvec; adds into acc (cols entries).
void matvec_t_acc(const double* W, std::size_t lda, const double* g,
                  double* acc, std::size_t rows, std::size_t cols);

// Rank-1 accumulation W += g x^T (outer product of g (rows) and x (cols)).
void ger_acc(double* W, std::size_t lda, const double* g, const double* x,
             std::size_t rows, std::size_t cols);

double dot(const double* a, const double* b, std::size_t n);

// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

// y[i] = max(x[i], 0)
void relu(const double* x, double* y, std::size_t n);

// out[i] = g[i] where pre[i] > 0, else 0. Backward mask for relu.
void relu_mask(const double* pre, const double* g, double* out, std::size_t n);

double sum(const double* x, std::size_t n);

// Function-pointer table filled in by each backend.
struct Table {
  void (*matvec)(const double*, std::size_t, const double*, const double*,
                 double*, std::size_t, std::size_t);
  void (*matvec_t_acc)(const double*, std::size_t, const double*, double*,
                       std::size_t, std::size_t);
  void (*ger_acc)(double*, std::size_t, const double*, const double*,
                  std::size_t, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*relu)(const double*, double*, std::size_t);
  void (*relu_mask)(const double*, const double*, double*, std::size_t);
  double (*sum)(const double*, std::size_t);
};

namespace detail {
extern const Table scalar_table;
extern const Table avx2_table;  // null pointers when not compiled in
}

}  // namespace latopt::kernels
