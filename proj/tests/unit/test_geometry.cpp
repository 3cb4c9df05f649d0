#include <cmath>

#include "doctest.h"
#include "saddle/errors.hpp"
#include "saddle/geometry.hpp"
#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("assembled norm examples") {
  const std::vector<ScaledMetric> two{ScaledMetric(1), ScaledMetric(1)};
  CHECK(assembled_norm(AssembledMetric(two, Vec{4, 1}), Vec{1, 0}) == doctest::Approx(2.0));
  CHECK(assembled_norm(AssembledMetric(two, Vec{2, 1}), Vec{1, 2}) == doctest::Approx(std::sqrt(6.0)));
  CHECK(assembled_norm(AssembledMetric({ScaledMetric(3)}, Vec{1}), Vec{0, 0, 0}) == 0.0);
}

TEST_CASE("assembled dual norm examples") {
  const AssembledMetric m({ScaledMetric(1)}, Vec{4});
  CHECK(assembled_dual_norm(m, Vec{2}) == doctest::Approx(1.0));
  CHECK(assembled_dual_norm(m, Vec{0}) == 0.0);
}

TEST_CASE("dimension mismatch is a structural error") {
  const AssembledMetric m({ScaledMetric(2), ScaledMetric(1)}, Vec{1, 1});
  CHECK_THROWS_AS(assembled_norm(m, Vec{1, 2}), StructuralError);
  CHECK_THROWS_AS(ScaledMetric(Vec{1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("norm identities hold for random points") {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d1 = 1 + trial % 3, d2 = 1 + trial % 4;
    Vec w1(d1), w2(d2);
    for (double& v : w1) v = u(rng);
    for (double& v : w2) v = u(rng);
    const double a1 = u(rng), a2 = u(rng);
    const AssembledMetric m({ScaledMetric(w1), ScaledMetric(w2)}, Vec{a1, a2});
    const Vec z = random_gaussian(d1 + d2, rng), g = random_gaussian(d1 + d2, rng);
    // Independent expansion of <P z, z> with P = diag(a1 w1, a2 w2).
    double expanded = 0.0, dual = 0.0;
    for (std::size_t i = 0; i < d1; ++i) {
      expanded += a1 * w1[i] * z[i] * z[i];
      dual += g[i] * g[i] / (a1 * w1[i]);
    }
    for (std::size_t i = 0; i < d2; ++i) {
      expanded += a2 * w2[i] * z[d1 + i] * z[d1 + i];
      dual += g[d1 + i] * g[d1 + i] / (a2 * w2[i]);
    }
    CHECK(m.sq_norm(z) == doctest::Approx(expanded).epsilon(1e-12));
    CHECK(m.sq_dual_norm(g) == doctest::Approx(dual).epsilon(1e-12));
    CHECK(std::abs(dot(g, z)) <= m.norm(z) * m.dual_norm(g) * (1 + 1e-12));
    CHECK(m.dual_norm(m.apply(z)) == doctest::Approx(m.norm(z)).epsilon(1e-12));
    const Vec back = m.apply_inverse(m.apply(z));
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(back[i] == doctest::Approx(z[i]));
  }
}
