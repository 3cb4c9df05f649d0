#include "doctest.h"
#include "saddle/baseline.hpp"
#include "saddle/ledger.hpp"
#include "saddle/problems.hpp"

using namespace saddle;

TEST_CASE("query and round counters") {
  Ledger l(2);
  CHECK(l.round() == 0);
  l.record_query(0, Vec{0, 0}, Vec{1});
  CHECK(l.queries(0) == 1);
  l.record_query(0, Vec{0, 0}, Vec{1});
  l.record_query(1, Vec{0, 0}, Vec{2});
  CHECK(l.query_counts() == std::vector<std::size_t>{2, 1});
  l.end_round();
  CHECK(l.round() == 1);
  CHECK(l.trace(0, 0).size() == 2);
  CHECK(l.trace(0, 1).size() == 1);
  CHECK_THROWS(l.record_query(2, Vec{0}, Vec{0}));
}

TEST_CASE("weighted oracle cost") {
  Ledger a(2, Vec{1, 2});
  for (int i = 0; i < 3; ++i) a.record_query(0, Vec{0}, Vec{0});
  for (int i = 0; i < 4; ++i) a.record_query(1, Vec{0}, Vec{0});
  CHECK(a.weighted_oracle_cost() == 11.0);
  Ledger b(2);
  CHECK(b.weighted_oracle_cost() == 0.0);
  for (int i = 0; i < 5; ++i) {
    b.record_query(0, Vec{0}, Vec{0});
    b.record_query(1, Vec{0}, Vec{0});
  }
  CHECK(b.weighted_oracle_cost() == 10.0);
}

TEST_CASE("gradient span verification") {
  const ScaledMetric id(2);
  Ledger l(1);
  CHECK(verify_gradient_span(l, 0, Vec{0, 0}, Vec{0, 0}, id).ok);
  l.record_query(0, Vec{0, 0}, Vec{1, 0});
  l.record_query(0, Vec{0, 0}, Vec{2, 0});
  CHECK(verify_gradient_span(l, 0, Vec{3, 0}, Vec{0, 0}, id).ok);
  const SpanCheck off = verify_gradient_span(l, 0, Vec{0, 1}, Vec{0, 0}, id);
  CHECK_FALSE(off.ok);
  CHECK(off.residual == doctest::Approx(1.0));
  // In a scaled metric the span is of P^{-1} g.
  const ScaledMetric p(Vec{2, 1});
  Ledger m(1);
  m.record_query(0, Vec{0, 0}, Vec{1, 1});
  CHECK(verify_gradient_span(m, 0, Vec{0.5, 1}, Vec{0, 0}, p).ok);
  CHECK_FALSE(verify_gradient_span(m, 0, Vec{1, 1}, Vec{0, 0}, p).ok);
}

TEST_CASE("visibility excludes the current round of remote agents") {
  const std::vector<ScaledMetric> metrics{ScaledMetric(1), ScaledMetric(1)};
  Ledger l(2);
  // Agent 1 queries at a point whose x-part uses agent 0's gradient from the
  // same round: a violation.
  l.record_query(0, Vec{0, 0}, Vec{1});
  l.record_query(1, Vec{1, 0}, Vec{1});
  l.end_round();
  CHECK_FALSE(audit_gradient_span(l, metrics, Vec{0, 0}).ok);
  Ledger ok(2);
  ok.record_query(0, Vec{0, 0}, Vec{1});
  ok.record_query(1, Vec{0, 0}, Vec{1});
  ok.end_round();
  ok.record_query(1, Vec{1, 1}, Vec{1});
  CHECK(audit_gradient_span(ok, metrics, Vec{0, 0}).ok);
}

TEST_CASE("ledger csv and replay determinism") {
  Rng rng(4);
  const SaddleInstance sp = random_quadratic_saddle(3, 3, 1, 1, 1, 1, 1, rng);
  auto run = [&]() {
    Ledger l(2);
    EgParams p;
    p.max_rounds = 10;
    p.epsilon = 1e-12;
    eg_run(sp, p, l);
    return l.to_csv();
  };
  const std::string a = run();
  CHECK(a == run());
  CHECK(a.find("round,agent,index,point,response") == 0);
}
