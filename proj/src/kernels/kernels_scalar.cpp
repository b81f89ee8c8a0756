#include "rl4im/kernels.hpp"

namespace rl4im::kernels::scalar {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void gemv(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y,
          bool accumulate) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double v = dot(w + r * cols, x, cols);
    y[r] = accumulate ? y[r] + v : v;
  }
}

void relu(double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

}  // namespace

const KernelTable& table() {
  static const KernelTable t{dot, axpy, gemv, relu};
  return t;
}

}  // namespace rl4im::kernels::scalar
