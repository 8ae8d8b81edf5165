#include "latopt/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace latopt::kernels {

#if !defined(LATOPT_HAVE_AVX2_SOURCES)
// Non-x86 build: the AVX2 translation unit is absent, keep an empty table so
// backend_supported() can answer honestly.
const Table detail::avx2_table = {nullptr, nullptr, nullptr, nullptr,
                                  nullptr, nullptr, nullptr, nullptr};
#endif

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend pick_initial() {
  if (const char* env = std::getenv("LATOPT_KERNELS")) {
    const std::string s(env);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
    // Unknown or unsupported request in the environment falls back to
    // autodetection rather than aborting a run over a typo.
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

struct State {
  Backend backend;
  const Table* table;
  State() : backend(pick_initial()) {
    table = backend == Backend::avx2 ? &detail::avx2_table : &detail::scalar_table;
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool backend_supported(Backend b) {
  if (b == Backend::scalar) return true;
  return detail::avx2_table.dot != nullptr && cpu_has_avx2();
}

Backend active_backend() { return state().backend; }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument("kernel backend not supported on this machine: " +
                                backend_name(b));
  state().backend = b;
  state().table = b == Backend::avx2 ? &detail::avx2_table : &detail::scalar_table;
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void matvec(const double* W, std::size_t lda, const double* x, const double* b,
            double* y, std::size_t rows, std::size_t cols) {
  state().table->matvec(W, lda, x, b, y, rows, cols);
}

void matvec_t_acc(const double* W, std::size_t lda, const double* g,
                  double* acc, std::size_t rows, std::size_t cols) {
  state().table->matvec_t_acc(W, lda, g, acc, rows, cols);
}

void ger_acc(double* W, std::size_t lda, const double* g, const double* x,
             std::size_t rows, std::size_t cols) {
  state().table->ger_acc(W, lda, g, x, rows, cols);
}

double dot(const double* a, const double* b, std::size_t n) {
  return state().table->dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  state().table->axpy(alpha, x, y, n);
}

void relu(const double* x, double* y, std::size_t n) {
  state().table->relu(x, y, n);
}

void relu_mask(const double* pre, const double* g, double* out, std::size_t n) {
  state().table->relu_mask(pre, g, out, n);
}

double sum(const double* x, std::size_t n) {
  return state().table->sum(x, n);
}

}  // namespace latopt::kernels
