#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "saddle/geometry.hpp"
#include "saddle/linalg.hpp"

namespace saddle {

struct QueryRecord {
  Vec point;     // joint query point
  Vec response;  // the agent's block covector
};

// Communication rounds, per-agent oracle queries and the per-round trace of
// what each agent asked and received.
class Ledger {
 public:
  explicit Ledger(std::size_t agents, Vec costs = {}, bool keep_trace = true);

  void record_query(std::size_t agent, Vec point, Vec response);
  void end_round();

  std::size_t agents() const { return counts_.size(); }
  // Completed rounds.
  std::size_t round() const { return round_; }
  std::size_t queries(std::size_t agent) const;
  const std::vector<std::size_t>& query_counts() const { return counts_; }
  const Vec& costs() const { return costs_; }
  double weighted_oracle_cost() const;

  bool keeps_trace() const { return keep_trace_; }
  // Rounds with trace storage: completed rounds plus the open one.
  std::size_t trace_rounds() const { return trace_.size(); }
  const std::vector<QueryRecord>& trace(std::size_t round, std::size_t agent) const;

  // One line per recorded query: round,agent,index,point,response with vector
  // entries separated by ';'.
  std::string to_csv() const;

 private:
  std::vector<std::size_t> counts_;
  Vec costs_;
  bool keep_trace_;
  std::size_t round_ = 0;
  std::vector<std::vector<std::vector<QueryRecord>>> trace_;
};

// Which of an agent's recorded responses count as visible: everything from
// rounds before `before_round`, plus the first `own_count` responses of round
// `before_round` itself.
struct Visibility {
  std::size_t before_round = std::numeric_limits<std::size_t>::max();
  std::size_t own_count = 0;
};

struct SpanCheck {
  bool ok = false;
  double residual = 0.0;
};

// Is candidate - origin in P^{-1} span{visible responses of `agent`}?
// Residual measured in the metric norm; passes at <= 1e-8 (1 + ||candidate||).
SpanCheck verify_gradient_span(const Ledger& ledger, std::size_t agent, const Vec& candidate,
                               const Vec& origin, const ScaledMetric& metric,
                               Visibility visibility = {});

// Incremental P-orthonormal basis of P^{-1} span{g_1, g_2, ...}.
class SpanBasis {
 public:
  explicit SpanBasis(ScaledMetric metric);
  void add_gradient(const Vec& g);
  std::size_t size() const { return basis_.size(); }
  // Residual of d against the first `prefix` basis vectors.
  double residual(const Vec& d, std::size_t prefix) const;

 private:
  ScaledMetric metric_;
  std::vector<Vec> basis_;
};

struct SpanAudit {
  bool ok = true;
  double worst_residual = 0.0;
  std::size_t checked = 0;
  std::string first_failure;
};

// Replays the whole trace and checks every query point against the
// visibility rule: the querying agent's own block against its own earlier
// responses, every other block against that agent's responses from earlier
// rounds only. Block layout given by `metrics`, origin by `z0`.
SpanAudit audit_gradient_span(const Ledger& ledger, const std::vector<ScaledMetric>& metrics,
                              const Vec& z0);

}  // namespace saddle
