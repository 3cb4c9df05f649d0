#include <cmath>

#include "doctest.h"
#include "saddle/composite.hpp"
#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("prox examples") {
  const ScaledMetric id2(2), id1(1);
  const Vec z = prox_composite(CompositeTerm::zero(), id2, Vec{3, -1}, 0.7);
  CHECK(z == Vec{3, -1});
  const Vec b = prox_composite(CompositeTerm::ball(Vec{0, 0}, 1.0), id2, Vec{2, 0}, 1.0);
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(0.0));
  // v / (1 + step mu)
  const Vec q = prox_composite(CompositeTerm::quadratic(1.0, Vec{0}), id1, Vec{2}, 1.0);
  CHECK(q[0] == doctest::Approx(1.0));
}

TEST_CASE("prox respects the metric") {
  // Ball radius measured in P: ||w||_P <= 1 with P = diag(4, 1).
  const ScaledMetric m(Vec{4, 1});
  const CompositeTerm ball = CompositeTerm::ball(Vec{0, 0}, 1.0);
  const Vec p = ball.prox(m, Vec{1, 0}, 1.0);
  CHECK(m.norm(p) == doctest::Approx(1.0));
  CHECK(p[0] == doctest::Approx(0.5));
  const Vec box = CompositeTerm::box(Vec{-1, -1}, Vec{1, 1}).prox(m, Vec{3, -0.5}, 2.0);
  CHECK(box == Vec{1, -0.5});
}

TEST_CASE("prox is feasible and optimal for random terms") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 4;
    Vec w(n);
    for (double& x : w) x = u(rng);
    const ScaledMetric m(w);
    const Vec c = random_gaussian(n, rng);
    Vec lo = c, hi = c;
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] -= u(rng);
      hi[i] += u(rng);
    }
    const CompositeTerm terms[] = {
        CompositeTerm::ball(c, u(rng)), CompositeTerm::box(lo, hi), CompositeTerm::quadratic(u(rng), c),
        CompositeTerm::sum(CompositeTerm::quadratic(u(rng), random_gaussian(n, rng)), CompositeTerm::box(lo, hi))};
    for (const CompositeTerm& t : terms) {
      const Vec v = scaled(3.0, random_gaussian(n, rng));
      const double step = u(rng);
      const Vec p = t.prox(m, v, step);
      CHECK(t.in_domain(m, p));
      CHECK(t.is_subgradient(m, p, scaled(1.0 / step, m.apply(sub(v, p))), 1e-10));
      // No other feasible point does better on the prox objective.
      auto objective = [&](const Vec& q) { return m.sq_norm(sub(q, v)) / (2 * step) + t.value(m, q); };
      const Vec other = t.project_domain(m, add(p, scaled(0.1, random_gaussian(n, rng))));
      CHECK(objective(p) <= objective(other) + 1e-12);
    }
  }
}

TEST_CASE("with_quadratic merges regularizers") {
  const ScaledMetric m(1);
  const CompositeTerm t = CompositeTerm::quadratic(1.0, Vec{0}).with_quadratic(1.0, Vec{2});
  // (1/2) w^2 + (1/2)(w - 2)^2 = w^2 - 2w + 2, minimized at 1.
  CHECK(t.mu() == doctest::Approx(2.0));
  CHECK(t.prox(m, Vec{1}, 1e12)[0] == doctest::Approx(1.0).epsilon(1e-6));
  const CompositeTerm b = CompositeTerm::ball(Vec{0}, 1.0).with_quadratic(2.0, Vec{5});
  CHECK(b.has_quadratic());
  CHECK(b.prox(m, Vec{5}, 1.0)[0] == doctest::Approx(1.0));
  CHECK(b.value(m, Vec{2}) == INFINITY);
}

TEST_CASE("invalid terms are rejected") {
  CHECK_THROWS(CompositeTerm::ball(Vec{0}, 0.0));
  CHECK_THROWS(CompositeTerm::box(Vec{1}, Vec{0}));
  CHECK_THROWS(CompositeTerm::quadratic(-1.0, Vec{0}));
}
