#include <cmath>

#include "doctest.h"
#include "saddle/errors.hpp"
#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("bilinear oracles") {
  const SaddleInstance sp = make_bilinear_sp(Matrix{{1.0}}, Vec{0.0}, 1.0, 1.0);
  CHECK(sp.grad_x(Vec{1}, Vec{2})[0] == 2.0);
  CHECK(sp.grad_y(Vec{1}, Vec{2})[0] == 1.0);
  CHECK(sp.declared.L_xy == doctest::Approx(1.0));
  CHECK(sp.declared.L_x == 0.0);
  CHECK_THROWS_AS(make_bilinear_sp(Matrix{{1.0, 2.0}}, Vec{0.0, 1.0}, 1, 1), StructuralError);
}

TEST_CASE("quadratic subclass oracles") {
  const SaddleInstance x = make_quadratic_sp(Matrix{{1.0}}, Vec{1.0}, 'x');
  CHECK(x.grad_x(Vec{0}, x.y0)[0] == doctest::Approx(-1.0));
  CHECK(x.grad_x(Vec{1}, x.y0)[0] == doctest::Approx(0.0));
  const SaddleInstance y = make_quadratic_sp(Matrix{{2.0}}, Vec{0.0}, 'y');
  // The instance returns the gradient in y; agent y's covector is its negation.
  const VipInstance v = as_vip(y);
  CHECK(v.oracles[1](concat(y.x0, Vec{1}))[0] == doctest::Approx(4.0));
  CHECK(y.grad_y(y.x0, Vec{1})[0] == doctest::Approx(-4.0));
}

TEST_CASE("weakly coupled strongly convex-concave generator") {
  const SaddleInstance sp = make_weakly_coupled_scsc(1.0, 1.0, 0.1, 1);
  CHECK(sp.grad_x(Vec{1}, Vec{1})[0] == doctest::Approx(1.1));
  const SaddleInstance dec = make_weakly_coupled_scsc(1.0, 1.0, 0.0, 2);
  const auto sol = dec.known_solution();
  REQUIRE(sol);
  for (double v : *sol) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("polymatrix examples") {
  const VipInstance two = make_polymatrix_vip({1, 1}, Matrix{{0, 1}, {-1, 0}}, Vec{0, 0});
  const Vec v = two.evaluate(Vec{2, 3});
  CHECK(v[0] == 3.0);
  CHECK(v[1] == -2.0);
  const VipInstance id = make_polymatrix_vip({1}, Matrix{{1.0}}, Vec{0});
  CHECK(id.evaluate(Vec{5})[0] == 5.0);

  const Matrix m3{{0, 1, 1}, {-1, 0, 1}, {-1, -1, 0}};
  const VipInstance three = make_polymatrix_vip({1, 1, 1}, m3, Vec{1, 0, 0});
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const Vec z = random_gaussian(3, rng), w = random_gaussian(3, rng);
    // Skew part cancels and the diagonal blocks are zero.
    CHECK(dot(sub(three.evaluate(z), three.evaluate(w)), sub(z, w)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK_THROWS(make_polymatrix_vip({1, 1}, Matrix{{0, 1}, {1, 0}}, Vec{0, 0}));
}

TEST_CASE("random generators honor declared constants") {
  Rng rng(8);
  const SaddleInstance sp = random_quadratic_saddle(6, 5, 3.0, 2.0, 0.5, 1.5, 0.7, rng);
  CHECK(sp.declared.L_x == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(sp.declared.L_xy == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sp.declared.L_y == doctest::Approx(0.5).epsilon(1e-8));
  const auto sol = sp.known_solution();
  REQUIRE(sol);
  // Stationarity and distance from z0 = 0.
  const Vec xs(sol->begin(), sol->begin() + 6), ys(sol->begin() + 6, sol->end());
  CHECK(norm2(sp.grad_x(xs, ys)) <= 1e-10);
  CHECK(norm2(sp.grad_y(xs, ys)) <= 1e-10);
  CHECK(norm2(xs) == doctest::Approx(1.5));
  CHECK(norm2(ys) == doctest::Approx(0.7));
  for (int t = 0; t < 500; ++t) {
    const Vec x = random_gaussian(6, rng), x2 = random_gaussian(6, rng);
    const Vec y = random_gaussian(5, rng), y2 = random_gaussian(5, rng);
    CHECK(norm2(sub(sp.grad_x(x, y), sp.grad_x(x2, y))) <= sp.declared.L_x * norm2(sub(x, x2)) * (1 + 1e-8));
    CHECK(norm2(sub(sp.grad_x(x, y), sp.grad_x(x, y2))) <= sp.declared.L_xy * norm2(sub(y, y2)) * (1 + 1e-8));
    CHECK(norm2(sub(sp.grad_y(x, y), sp.grad_y(x, y2))) <= sp.declared.L_y * norm2(sub(y, y2)) * (1 + 1e-8));
    const VipInstance v = as_vip(sp);
    const Vec z = concat(x, y), z2 = concat(x2, y2);
    CHECK(dot(sub(v.evaluate(z), v.evaluate(z2)), sub(z, z2)) >= -1e-10);
  }
}

TEST_CASE("random polymatrix instances are monotone with their solution at distance D") {
  Rng rng(12);
  const VipInstance vip = random_polymatrix({2, 3, 2}, 1.5, 0.5, Vec{1.0, 2.0, 0.5}, rng);
  REQUIRE(vip.solution);
  CHECK(norm2(vip.evaluate(*vip.solution)) <= 1e-10);
  for (std::size_t i = 0; i < 3; ++i) CHECK(norm2(vip.slice(*vip.solution, i)) == doctest::Approx(vip.D[i]));
  for (int t = 0; t < 300; ++t) {
    const Vec z = random_gaussian(7, rng), w = random_gaussian(7, rng);
    CHECK(dot(sub(vip.evaluate(z), vip.evaluate(w)), sub(z, w)) >= -1e-10);
  }
  CHECK(vip.lbar(0, 1) == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("spectral norm by power iteration") {
  CHECK(spectral_norm(Matrix{{3, 0}, {0, -4}}) == doctest::Approx(4.0));
  CHECK(spectral_norm(Matrix{{1, 1}, {1, 1}}) == doctest::Approx(2.0));
  CHECK(spectral_norm(Matrix(3, 2)) == 0.0);
}
