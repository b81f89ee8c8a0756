#pragma once

// Dense double-precision kernels for the Q-network. Every routine has a
// scalar reference implementation; AVX2+FMA (x86-64) and NEON (AArch64)
// variants are selected at runtime from what the CPU supports. Set
// RL4IM_SIMD=scalar|avx2|neon to force a level.

#include <cstddef>
#include <span>
#include <string_view>

namespace rl4im::kernels {

enum class SimdLevel { scalar, avx2, neon };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = W x, or y += W x when accumulate; W is rows x cols, row-major.
  void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x, double* y,
               bool accumulate);
  void (*relu)(double* v, std::size_t n);
};

namespace scalar {
const KernelTable& table();
}
#if defined(RL4IM_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(RL4IM_HAVE_NEON)
namespace neon {
const KernelTable& table();
}
#endif

bool level_supported(SimdLevel level);
SimdLevel best_supported_level();
SimdLevel active_level();
/// Throws std::invalid_argument when the level is not supported here.
void set_active_level(SimdLevel level);
std::string_view level_name(SimdLevel level);
const KernelTable& table_for(SimdLevel level);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::size_t rows, std::size_t cols, std::span<const double> x,
          std::span<double> y, bool accumulate = false);
/// y += W^T x, with W rows x cols.
void gemv_transposed_accumulate(std::span<const double> w, std::size_t rows, std::size_t cols,
                                std::span<const double> x, std::span<double> y);
/// W += alpha * x y^T, with W x.size() x y.size().
void rank1_update(std::span<double> w, std::span<const double> x, std::span<const double> y,
                  double alpha = 1.0);
void relu(std::span<double> v);

}  // namespace rl4im::kernels
