#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "rl4im/kernels.hpp"

namespace rl4im::kernels {

namespace {

SimdLevel initial_level() {
  if (const char* forced = std::getenv("RL4IM_SIMD")) {
    const std::string name(forced);
    for (SimdLevel l : {SimdLevel::scalar, SimdLevel::avx2, SimdLevel::neon}) {
      if (name == level_name(l) && level_supported(l)) return l;
    }
  }
  return best_supported_level();
}

std::atomic<SimdLevel>& active() {
  static std::atomic<SimdLevel> level{initial_level()};
  return level;
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": size mismatch");
}

}  // namespace

bool level_supported(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return true;
    case SimdLevel::avx2:
#if defined(RL4IM_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case SimdLevel::neon:
#if defined(RL4IM_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

SimdLevel best_supported_level() {
  if (level_supported(SimdLevel::avx2)) return SimdLevel::avx2;
  if (level_supported(SimdLevel::neon)) return SimdLevel::neon;
  return SimdLevel::scalar;
}

SimdLevel active_level() { return active().load(std::memory_order_relaxed); }

void set_active_level(SimdLevel level) {
  if (!level_supported(level)) {
    throw std::invalid_argument("SIMD level " + std::string(level_name(level)) +
                                " is not supported on this machine");
  }
  active().store(level, std::memory_order_relaxed);
}

std::string_view level_name(SimdLevel level) {
  switch (level) {
    case SimdLevel::scalar:
      return "scalar";
    case SimdLevel::avx2:
      return "avx2";
    case SimdLevel::neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& table_for(SimdLevel level) {
  switch (level) {
#if defined(RL4IM_HAVE_AVX2)
    case SimdLevel::avx2:
      return avx2::table();
#endif
#if defined(RL4IM_HAVE_NEON)
    case SimdLevel::neon:
      return neon::table();
#endif
    default:
      return scalar::table();
  }
}

namespace {
const KernelTable& current() { return table_for(active_level()); }
}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_size(a.size(), b.size(), "dot");
  return current().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_size(x.size(), y.size(), "axpy");
  current().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> w, std::size_t rows, std::size_t cols, std::span<const double> x,
          std::span<double> y, bool accumulate) {
  require_same_size(w.size(), rows * cols, "gemv");
  require_same_size(x.size(), cols, "gemv");
  require_same_size(y.size(), rows, "gemv");
  current().gemv(w.data(), rows, cols, x.data(), y.data(), accumulate);
}

void gemv_transposed_accumulate(std::span<const double> w, std::size_t rows, std::size_t cols,
                                std::span<const double> x, std::span<double> y) {
  require_same_size(w.size(), rows * cols, "gemv_transposed_accumulate");
  require_same_size(x.size(), rows, "gemv_transposed_accumulate");
  require_same_size(y.size(), cols, "gemv_transposed_accumulate");
  const auto& k = current();
  for (std::size_t r = 0; r < rows; ++r) {
    if (x[r] != 0.0) k.axpy(x[r], w.data() + r * cols, y.data(), cols);
  }
}

void rank1_update(std::span<double> w, std::span<const double> x, std::span<const double> y,
                  double alpha) {
  require_same_size(w.size(), x.size() * y.size(), "rank1_update");
  const auto& k = current();
  for (std::size_t r = 0; r < x.size(); ++r) {
    if (x[r] != 0.0) k.axpy(alpha * x[r], y.data(), w.data() + r * y.size(), y.size());
  }
}

void relu(std::span<double> v) { current().relu(v.data(), v.size()); }

}  // namespace rl4im::kernels
