#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "saddle/kernels.hpp"

using namespace saddle;

namespace {

std::vector<double> randoms(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match hand computation") {
  const kernels::Table& t = kernels::scalar_table();
  const double x[] = {1, 2, 3}, y[] = {4, -5, 6}, w[] = {2, 1, 0.5};
  CHECK(t.dot(x, y, 3) == doctest::Approx(12.0));
  CHECK(t.wdot(w, x, y, 3) == doctest::Approx(8.0 - 10.0 + 9.0));
  double acc[] = {1, 1, 1};
  t.axpy(2.0, x, acc, 3);
  CHECK(acc[2] == 7.0);
  const double a[] = {1, 2, 3, 4, 5, 6};  // 2 x 3
  double out[2];
  t.gemv(a, 2, 3, x, out);
  CHECK(out[0] == 14.0);
  CHECK(out[1] == 32.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  const kernels::Table* v = kernels::avx2_table();
  if (!v) {
    MESSAGE("AVX2 variant unavailable on this host");
    return;
  }
  const kernels::Table& s = kernels::scalar_table();
  std::mt19937_64 rng(9);
  // Lengths straddle the 4-wide vector body and its tails.
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 100u, 257u}) {
    const auto x = randoms(n, rng), y = randoms(n, rng), w = randoms(n, rng);
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(x[i] * y[i]) + std::abs(w[i] * x[i] * y[i]);
    CHECK(std::abs(s.dot(x.data(), y.data(), n) - v->dot(x.data(), y.data(), n)) <= 1e-14 * scale);
    CHECK(std::abs(s.wdot(w.data(), x.data(), y.data(), n) - v->wdot(w.data(), x.data(), y.data(), n)) <=
          1e-14 * scale);
    auto ys = y, yv = y;
    s.axpy(0.7, x.data(), ys.data(), n);
    v->axpy(0.7, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-15 * (1 + std::abs(ys[i])));
    const std::size_t rows = 1 + n % 6;
    const auto a = randoms(rows * n, rng);
    std::vector<double> os(rows), ov(rows);
    if (n > 0) {
      s.gemv(a.data(), rows, n, x.data(), os.data());
      v->gemv(a.data(), rows, n, x.data(), ov.data());
      for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(os[r] - ov[r]) <= 1e-13 * (1 + std::abs(os[r])));
    }
  }
}

TEST_CASE("active table reports a known variant") {
  const auto name = kernels::isa_name(kernels::active().isa);
  CHECK((name == "scalar" || name == "avx2"));
}
