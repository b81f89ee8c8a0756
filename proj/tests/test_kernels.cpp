#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rl4im/kernels.hpp"

using namespace rl4im::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool close(double a, double b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

}  // namespace

TEST_CASE("scalar level is always available") {
  CHECK(level_supported(SimdLevel::scalar));
  CHECK(level_supported(best_supported_level()));
  CHECK(level_name(SimdLevel::avx2) == "avx2");
}

TEST_CASE("vector kernels match the scalar reference") {
  std::mt19937_64 rng(1);
  const KernelTable& ref = scalar::table();
  for (SimdLevel level : {SimdLevel::avx2, SimdLevel::neon}) {
    if (!level_supported(level)) continue;
    CAPTURE(level_name(level));
    const KernelTable& simd = table_for(level);
    // Odd sizes exercise the remainder loops.
    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 13, 64, 67, 128}) {
      const auto a = random_vector(rng, n);
      const auto b = random_vector(rng, n);
      CHECK(close(ref.dot(a.data(), b.data(), n), simd.dot(a.data(), b.data(), n), n));

      auto y1 = b, y2 = b;
      ref.axpy(0.37, a.data(), y1.data(), n);
      simd.axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(close(y1[i], y2[i], 1.0));

      auto r1 = a, r2 = a;
      ref.relu(r1.data(), n);
      simd.relu(r2.data(), n);
      CHECK(r1 == r2);

      for (std::size_t rows : {1, 2, 3, 4, 5, 9, 64}) {
        const auto w = random_vector(rng, rows * n);
        auto g1 = random_vector(rng, rows);
        auto g2 = g1;
        for (bool acc : {false, true}) {
          ref.gemv(w.data(), rows, n, a.data(), g1.data(), acc);
          simd.gemv(w.data(), rows, n, a.data(), g2.data(), acc);
          for (std::size_t i = 0; i < rows; ++i) CHECK(close(g1[i], g2[i], n));
        }
      }
    }
  }
}

TEST_CASE("dispatch switches levels") {
  const SimdLevel original = active_level();
  set_active_level(SimdLevel::scalar);
  CHECK(active_level() == SimdLevel::scalar);
  for (SimdLevel level : {SimdLevel::avx2, SimdLevel::neon}) {
    if (!level_supported(level)) CHECK_THROWS_AS(set_active_level(level), std::invalid_argument);
  }
  set_active_level(original);
}

TEST_CASE("span helpers") {
  const std::vector<double> w{1, 2, 3, 4, 5, 6};  // 2 x 3
  const std::vector<double> x{1, 0, -1};
  std::vector<double> y(2);
  gemv(w, 2, 3, x, y);
  CHECK(y == std::vector<double>{-2, -2});
  std::vector<double> t(3, 1.0);
  gemv_transposed_accumulate(w, 2, 3, std::vector<double>{1, 2}, t);
  CHECK(t == std::vector<double>{10, 13, 16});
  std::vector<double> m(6, 0.0);
  rank1_update(m, std::vector<double>{1, 2}, std::vector<double>{3, 4, 5}, 2.0);
  CHECK(m == std::vector<double>{6, 8, 10, 12, 16, 20});
  CHECK(dot(x, x) == 2.0);
  std::vector<double> r{-1, 2, -3};
  relu(r);
  CHECK(r == std::vector<double>{0, 2, 0});
  CHECK_THROWS_AS(gemv(w, 2, 3, std::vector<double>{1, 2}, y), std::invalid_argument);
  CHECK_THROWS_AS(dot(x, std::vector<double>{1}), std::invalid_argument);
}
