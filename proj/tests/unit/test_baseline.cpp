#include <cmath>

#include "doctest.h"
#include "saddle/baseline.hpp"
#include "saddle/evaluation.hpp"

using namespace saddle;

TEST_CASE("EG on the unit bilinear instance meets its round bound") {
  Rng rng(1);
  const SaddleInstance sp = random_bilinear(6, 6, 1.0, 1.0, 1.0, rng);
  Ledger l(2);
  EgParams p;
  p.epsilon = 0.1;
  const RunResult r = eg_run(sp, p, l);
  CHECK(r.status == RunStatus::kConverged);
  CHECK(r.gap.value <= 0.1);
  CHECK(r.rounds <= 20);
  CHECK(r.rounds % 2 == 0);
  CHECK(r.queries[0] == r.rounds);
  CHECK(r.queries[1] == r.rounds);
}

TEST_CASE("EG terminates at once at an exact saddle") {
  const SaddleInstance sp = make_bilinear_sp(Matrix{{1, 0}, {0, 2}}, Vec{0, 0}, 1, 1);
  Ledger l(2);
  EgParams p;
  const RunResult r = eg_run(sp, p, l);
  CHECK(r.gap.value == doctest::Approx(0.0));
  CHECK(r.rounds <= 2);
}

TEST_CASE("EG reports budget exhaustion without throwing") {
  Rng rng(2);
  const SaddleInstance sp = random_bilinear(4, 4, 1.0, 1.0, 1.0, rng);
  Ledger l(2);
  EgParams p;
  p.epsilon = 1e-9;
  p.max_rounds = 6;
  const RunResult r = eg_run(sp, p, l);
  CHECK(r.status == RunStatus::kBudgetExhausted);
  CHECK(r.rounds == 6);
}

TEST_CASE("EG candidate is the eta-weighted average of midpoints") {
  Rng rng(3);
  const SaddleInstance sp = random_bilinear(3, 3, 1.0, 1.0, 1.0, rng);
  Ledger l(2);
  EgParams p;
  p.epsilon = 1e-12;
  p.max_rounds = 10;
  const RunResult r = eg_run(sp, p, l);
  Vec avg(6, 0.0);
  for (std::size_t t = 1; t < l.round(); t += 2) axpy(1.0, l.trace(t, 0).front().point, avg);
  const Vec expected = scaled(1.0 / 5.0, avg);
  for (std::size_t i = 0; i < 6; ++i) CHECK(r.candidate[i] == doctest::Approx(expected[i]));
}

TEST_CASE("DGDA contracts on a decoupled instance at rate |1 - eta mu|") {
  const SaddleInstance sp = make_weakly_coupled_scsc(2.0, 2.0, 0.0, 2, Vec{1, -1}, Vec{0.5, 0.5});
  Ledger l(2);
  DgdaParams p;
  p.eta_x = p.eta_y = 0.1;
  p.max_rounds = 5;
  p.epsilon = 0.0;
  dgda_run(sp, p, l);
  for (std::size_t t = 1; t < l.round(); ++t) {
    const double prev = norm2(l.trace(t - 1, 0).front().point);
    const double cur = norm2(l.trace(t, 0).front().point);
    CHECK(cur / prev == doctest::Approx(0.8));
  }
}

TEST_CASE("DGDA flags divergence under strong coupling") {
  const SaddleInstance sp = make_weakly_coupled_scsc(1.0, 1.0, 2.0, 2);
  Ledger l(2);
  DgdaParams p;
  p.tau = 20;
  p.eta_x = p.eta_y = 0.5;
  p.max_rounds = 1000;
  const RunResult r = dgda_run(sp, p, l);
  CHECK(r.status == RunStatus::kDiverged);
  CHECK_THROWS(dgda_run(sp, DgdaParams{0}, l));
}

TEST_CASE("EG on a multi-block VIP") {
  Rng rng(4);
  const VipInstance vip = random_polymatrix({2, 2, 2}, 1.0, 0.0, Vec{1, 1, 1}, rng);
  const Vec alphas = eg_default_alphas(vip, vip.D);
  CHECK(alphas[0] == doctest::Approx(vip.lbar(0, 1) + vip.lbar(0, 2)));
  const VipGapEvaluator gap(vip, default_domain(vip));
  Ledger l(3);
  EgParams p;
  p.epsilon = 0.1;
  const RunResult r = eg_run(vip, p, l, [&](const Vec& z) { return gap(z); });
  CHECK(r.status == RunStatus::kConverged);
}
