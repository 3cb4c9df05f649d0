#include "saddle/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "saddle/errors.hpp"

namespace saddle {

Ledger::Ledger(std::size_t agents, Vec costs, bool keep_trace)
    : counts_(agents, 0), costs_(std::move(costs)), keep_trace_(keep_trace) {
  if (agents == 0) throw StructuralError("Ledger: need at least one agent");
  if (costs_.empty()) costs_.assign(agents, 1.0);
  if (costs_.size() != agents) throw StructuralError("Ledger: costs must have one entry per agent");
  for (double c : costs_)
    if (c < 0.0) throw ParameterError("Ledger: costs must be >= 0");
  trace_.emplace_back(agents);
}

void Ledger::record_query(std::size_t agent, Vec point, Vec response) {
  if (agent >= counts_.size()) throw StructuralError("Ledger::record_query: agent index out of range");
  ++counts_[agent];
  if (keep_trace_) trace_.back()[agent].push_back({std::move(point), std::move(response)});
}

void Ledger::end_round() {
  ++round_;
  trace_.emplace_back(counts_.size());
}

std::size_t Ledger::queries(std::size_t agent) const {
  if (agent >= counts_.size()) throw StructuralError("Ledger::queries: agent index out of range");
  return counts_[agent];
}

double Ledger::weighted_oracle_cost() const {
  double s = 0.0;
  for (std::size_t i = 0; i < counts_.size(); ++i) s += costs_[i] * static_cast<double>(counts_[i]);
  return s;
}

const std::vector<QueryRecord>& Ledger::trace(std::size_t round, std::size_t agent) const {
  if (round >= trace_.size() || agent >= counts_.size())
    throw StructuralError("Ledger::trace: index out of range");
  return trace_[round][agent];
}

std::string Ledger::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "round,agent,index,point,response\n";
  auto join = [&os](const Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
  };
  for (std::size_t r = 0; r < trace_.size(); ++r)
    for (std::size_t a = 0; a < counts_.size(); ++a)
      for (std::size_t q = 0; q < trace_[r][a].size(); ++q) {
        os << r << ',' << a << ',' << q << ',';
        join(trace_[r][a][q].point);
        os << ',';
        join(trace_[r][a][q].response);
        os << '\n';
      }
  return os.str();
}

SpanBasis::SpanBasis(ScaledMetric metric) : metric_(std::move(metric)) {}

void SpanBasis::add_gradient(const Vec& g) {
  if (g.size() != metric_.dim()) throw StructuralError("SpanBasis: dimension mismatch");
  Vec v = metric_.apply_inverse(g);
  const double n0 = metric_.norm(v);
  if (n0 == 0.0 || basis_.size() == metric_.dim()) return;
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& q : basis_) axpy(-metric_.inner(q, v), q, v);
  const double n1 = metric_.norm(v);
  if (n1 <= 1e-12 * n0) return;
  for (double& e : v) e /= n1;
  basis_.push_back(std::move(v));
}

double SpanBasis::residual(const Vec& d, std::size_t prefix) const {
  Vec r = d;
  const std::size_t k = std::min(prefix, basis_.size());
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t i = 0; i < k; ++i) axpy(-metric_.inner(basis_[i], r), basis_[i], r);
  return metric_.norm(r);
}

SpanCheck verify_gradient_span(const Ledger& ledger, std::size_t agent, const Vec& candidate,
                               const Vec& origin, const ScaledMetric& metric,
                               Visibility visibility) {
  if (candidate.size() != metric.dim() || origin.size() != metric.dim())
    throw StructuralError("verify_gradient_span: dimension mismatch");
  SpanBasis basis(metric);
  for (std::size_t r = 0; r < ledger.trace_rounds() && r <= visibility.before_round; ++r) {
    const auto& records = ledger.trace(r, agent);
    const std::size_t limit = r < visibility.before_round ? records.size()
                                                          : std::min(records.size(), visibility.own_count);
    for (std::size_t q = 0; q < limit; ++q) basis.add_gradient(records[q].response);
  }
  SpanCheck out;
  out.residual = basis.residual(sub(candidate, origin), basis.size());
  out.ok = out.residual <= 1e-8 * (1.0 + norm2(candidate));
  return out;
}

SpanAudit audit_gradient_span(const Ledger& ledger, const std::vector<ScaledMetric>& metrics,
                              const Vec& z0) {
  const std::size_t k = metrics.size();
  if (k != ledger.agents()) throw StructuralError("audit_gradient_span: agent count mismatch");
  std::vector<std::size_t> off(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) off[i + 1] = off[i] + metrics[i].dim();
  if (z0.size() != off[k]) throw StructuralError("audit_gradient_span: z0 dimension mismatch");
  auto part = [&](const Vec& z, std::size_t i) {
    return Vec(z.begin() + static_cast<std::ptrdiff_t>(off[i]),
               z.begin() + static_cast<std::ptrdiff_t>(off[i + 1]));
  };

  std::vector<SpanBasis> bases;
  for (const auto& m : metrics) bases.emplace_back(m);
  std::vector<std::size_t> size_at_round_start(k, 0);
  SpanAudit audit;
  for (std::size_t r = 0; r < ledger.trace_rounds(); ++r) {
    for (std::size_t i = 0; i < k; ++i) size_at_round_start[i] = bases[i].size();
    // Remote blocks are judged against the snapshot at the round start, so
    // processing agents in order inside a round is safe.
    for (std::size_t a = 0; a < k; ++a) {
      const auto& records = ledger.trace(r, a);
      SpanBasis& own = bases[a];
      for (std::size_t q = 0; q < records.size(); ++q) {
        const Vec& z = records[q].point;
        for (std::size_t j = 0; j < k; ++j) {
          const Vec d = sub(part(z, j), part(z0, j));
          const std::size_t prefix = j == a ? own.size() : size_at_round_start[j];
          const double res = bases[j].residual(d, prefix);
          ++audit.checked;
          audit.worst_residual = std::max(audit.worst_residual, res);
          if (res > 1e-8 * (1.0 + norm2(part(z, j))) && audit.ok) {
            audit.ok = false;
            std::ostringstream os;
            os << "round " << r << " agent " << a << " query " << q << " block " << j
               << " residual " << res;
            audit.first_failure = os.str();
          }
        }
        own.add_gradient(records[q].response);
      }
    }
  }
  return audit;
}

}  // namespace saddle
