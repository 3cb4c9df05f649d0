#include <Eigen/Dense>

#include <cmath>

#include "doctest.h"
#include "saddle/errors.hpp"
#include "saddle/evaluation.hpp"
#include "saddle/hard_instances.hpp"

using namespace saddle;

TEST_CASE("construction geometry") {
  for (std::size_t k = 1; k <= 5; ++k) {
    const KrylovInstance inst = worst_case_instance(1.5, 0.7, k, 2 * k + 2, 2 * k + 1);
    CHECK(spectral_norm(inst.a) <= 1.5);
    CHECK(norm2(inst.v_star) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(norm2(sub(inst.a.apply(inst.v_star), inst.b)) <= 1e-12);
  }
  CHECK_THROWS_AS(worst_case_instance(1, 1, 3, 7, 7), StructuralError);
  CHECK_THROWS_AS(worst_case_instance(-1, 1, 1, 4, 4), ParameterError);
}

TEST_CASE("Krylov spaces of the construction are leading coordinate spans") {
  const KrylovInstance inst = worst_case_instance(1.0, 1.0, 4, 10, 10);
  for (std::size_t k = 1; k <= 4; ++k) {
    const KrylovBasis b = KrylovBasis::x_side(inst.a, inst.b, k);
    REQUIRE(b.size() == k);
    for (std::size_t j = 0; j < 10; ++j) {
      Vec e(10, 0.0);
      e[j] = 1.0;
      CHECK(b.residual(e) == doctest::Approx(j < k ? 0.0 : 1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("Krylov minimum residual matches its closed form and decreases in k") {
  for (std::size_t k = 1; k <= 8; ++k) {
    const KrylovInstance inst = worst_case_instance(2.0, 1.0, k, 2 * k + 3, 2 * k + 2);
    CHECK(krylov_min_residual(inst, k) == doctest::Approx(worst_case_residual(inst)).epsilon(1e-9));
    double prev = INFINITY;
    for (std::size_t j = 0; j <= 2 * k + 1; ++j) {
      const double r = krylov_min_residual(inst, j);
      CHECK(r <= prev + 1e-15);
      prev = r;
    }
    CHECK(krylov_min_residual(inst, inst.p) <= 1e-20);
  }
  Matrix a(3, 3);
  a(0, 0) = 1;
  CHECK(krylov_min_residual(a, Vec{0, 0, 0}, 2) == 0.0);
}

TEST_CASE("subclass instances") {
  const SaddleInstance x = make_subclass_instance("x", 4.0, 1.0, 1.0, 2, 6, 6);
  CHECK(x.declared.L_x == 4.0);
  CHECK(x.ny() == 1);
  const SaddleInstance y = make_subclass_instance("y", 4.0, 1.0, 2.0, 2, 6, 6);
  CHECK(y.declared.L_y == 4.0);
  CHECK(y.nx() == 1);
  CHECK_THROWS(make_subclass_instance("z", 1, 1, 1, 1, 4, 4));
}

TEST_CASE("bilinear hard instance gap lower bound") {
  CHECK(hard_instance_k(1, 1, 1, 1.0 / 30) == 10);
  const SaddleInstance sp = make_subclass_instance("xy", 1.0, 1.0, 1.0, 10, 22, 22);
  const SaddleGapEvaluator gap(sp, default_domain(sp));
  const auto sol = sp.known_solution();
  REQUIRE(sol);
  CHECK(gap(*sol).value == doctest::Approx(0.0).epsilon(1e-10));
  // Best candidate confined to the first k' coordinates, y = 0.
  const Matrix& a = sp.quadratic->a;
  const Vec b = scaled(-1.0, sp.quadratic->gy);
  Eigen::MatrixXd ae(22, 22);
  Eigen::VectorXd be(22);
  for (int i = 0; i < 22; ++i) {
    be(i) = b[i];
    for (int j = 0; j < 22; ++j) ae(i, j) = a(i, j);
  }
  // The bound is stated at the instance's own k = 10 and covers every
  // nested subspace H^k' with k' <= k.
  for (std::size_t kp = 0; kp <= 10; ++kp) {
    Vec x(22, 0.0);
    if (kp > 0) {
      const Eigen::VectorXd s = ae.leftCols(static_cast<Eigen::Index>(kp)).colPivHouseholderQr().solve(be);
      for (std::size_t j = 0; j < kp; ++j) x[j] = s(static_cast<Eigen::Index>(j));
    }
    const double g = gap(concat(x, Vec(22, 0.0))).value;
    CHECK(g >= std::sqrt(3.0 / (2.0 * (8.0 * 100 + 10.0 * 10 + 3.0))) - 1e-12);
    CHECK(g >= 1.0 / 33.0);
  }
}
