#include "saddle/baseline.hpp"

#include <cmath>
#include <limits>

#include "saddle/errors.hpp"

namespace saddle {

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kBudgetExhausted: return "budget-exhausted";
    case RunStatus::kDiverged: return "diverged";
    case RunStatus::kSolutionFound: return "solution-found";
  }
  return "unknown";
}

namespace {

void finish(RunResult& r, const Ledger& ledger) {
  r.rounds = ledger.round();
  r.queries = ledger.query_counts();
  r.weighted_cost = ledger.weighted_oracle_cost();
}

}  // namespace

Vec eg_default_alphas(const VipInstance& vip, const Vec& dhat) {
  const std::size_t k = vip.blocks();
  if (dhat.size() != k) throw StructuralError("eg_run: one distance estimate per block");
  Vec alphas(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(dhat[i] > 0.0)) throw ParameterError("eg_run: distance estimates must be positive");
    double s = vip.lipschitz(i, i) * dhat[i];
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) s += vip.lbar(i, j) * dhat[j];
    alphas[i] = s / dhat[i];
  }
  return alphas;
}

RunResult eg_run(const VipInstance& vip, const EgParams& params, Ledger& ledger,
                 const GapOracle& gap) {
  const std::size_t k = vip.blocks();
  if (ledger.agents() != k) throw StructuralError("eg_run: ledger agent count");
  if (!(params.eta > 0.0)) throw ParameterError("eg_run: eta must be positive");
  const Vec alphas =
      params.alphas.empty() ? eg_default_alphas(vip, params.dhat.empty() ? vip.D : params.dhat)
                            : params.alphas;
  if (alphas.size() != k) throw StructuralError("eg_run: one alpha per block");
  for (double a : alphas)
    if (!(a > 0.0)) throw ParameterError("eg_run: alphas must be positive (coupled instance)");

  RunResult r;
  Vec v = vip.z0;
  Vec avg(vip.dim(), 0.0);
  double weight = 0.0;
  Vec candidate = vip.z0;
  GapResult current = gap(candidate);

  auto check = [&]() {
    r.gap_history.push_back(current.value);
    return current.value <= params.epsilon;
  };

  while (ledger.round() + 2 <= params.max_rounds) {
    // Extrapolation half-step at v.
    Vec z(vip.dim());
    for (std::size_t i = 0; i < k; ++i) {
      Vec g = vip.oracles[i](v);
      const Vec vi = vip.slice(v, i);
      const double step = params.eta / alphas[i];
      Vec trial = lincomb(1.0, vi, -step, vip.metrics[i].apply_inverse(g));
      vip.assign(z, i, vip.psis[i].prox(vip.metrics[i], trial, step));
      ledger.record_query(i, v, std::move(g));
    }
    ledger.end_round();
    if (params.observer) params.observer(ledger, candidate);
    if (check()) break;
    // Update half-step at z.
    Vec next(vip.dim());
    for (std::size_t i = 0; i < k; ++i) {
      Vec g = vip.oracles[i](z);
      const Vec vi = vip.slice(v, i);
      const double step = params.eta / alphas[i];
      Vec trial = lincomb(1.0, vi, -step, vip.metrics[i].apply_inverse(g));
      vip.assign(next, i, vip.psis[i].prox(vip.metrics[i], trial, step));
      ledger.record_query(i, z, std::move(g));
    }
    ledger.end_round();
    v = std::move(next);
    axpy(params.eta, z, avg);
    weight += params.eta;
    candidate = scaled(1.0 / weight, avg);
    if (params.observer) params.observer(ledger, candidate);
    if (!all_finite(candidate)) {
      r.status = RunStatus::kDiverged;
      break;
    }
    current = gap(candidate);
    if (check()) break;
  }
  r.candidate = candidate;
  r.gap = current;
  if (r.status != RunStatus::kDiverged)
    r.status = current.value <= params.epsilon ? RunStatus::kConverged
                                               : RunStatus::kBudgetExhausted;
  finish(r, ledger);
  return r;
}

RunResult eg_run(const SaddleInstance& sp, const EgParams& params, Ledger& ledger) {
  const VipInstance vip = as_vip(sp);
  SaddleGapEvaluator evaluator(sp, default_domain(sp));
  return eg_run(vip, params, ledger, [&](const Vec& z) { return evaluator(z); });
}

RunResult dgda_run(const SaddleInstance& sp, const DgdaParams& params, Ledger& ledger) {
  if (ledger.agents() != 2) throw StructuralError("dgda_run: ledger needs two agents");
  if (params.tau < 1) throw ParameterError("dgda_run: tau must be at least 1");
  const SaddleParams& d = sp.declared;
  double eta_x = params.eta_x, eta_y = params.eta_y;
  if (eta_x <= 0.0) {
    if (!(d.L_x + d.L_xy > 0.0)) throw ParameterError("dgda_run: no default step for L = 0");
    eta_x = 1.0 / (2.0 * (d.L_x + d.L_xy));
  }
  if (eta_y <= 0.0) {
    if (!(d.L_y + d.L_xy > 0.0)) throw ParameterError("dgda_run: no default step for L = 0");
    eta_y = 1.0 / (2.0 * (d.L_y + d.L_xy));
  }
  SaddleGapEvaluator evaluator(sp, default_domain(sp));

  RunResult r;
  Vec x = sp.x0, y = sp.y0;
  while (ledger.round() < params.max_rounds) {
    const Vec x_hat = x, y_hat = y;
    for (std::size_t l = 0; l < params.tau; ++l) {
      Vec g = sp.grad_x(x, y_hat);
      Vec trial = lincomb(1.0, x, -eta_x, sp.metric_x.apply_inverse(g));
      ledger.record_query(0, concat(x, y_hat), std::move(g));
      x = sp.psi_x.prox(sp.metric_x, trial, eta_x);
    }
    for (std::size_t l = 0; l < params.tau; ++l) {
      Vec g = sp.grad_y(x_hat, y);
      Vec trial = lincomb(1.0, y, eta_y, sp.metric_y.apply_inverse(g));
      // Agent y's oracle is -grad_y f; record what it received.
      for (double& v : g) v = -v;
      ledger.record_query(1, concat(x_hat, y), std::move(g));
      y = sp.psi_y.prox(sp.metric_y, trial, eta_y);
    }
    ledger.end_round();
    const Vec z = concat(x, y);
    if (!all_finite(z) || norm2(z) > params.divergence_threshold) {
      r.status = RunStatus::kDiverged;
      r.candidate = z;
      r.gap.value = std::numeric_limits<double>::infinity();
      r.note = "iterate norm exceeded the divergence threshold";
      finish(r, ledger);
      return r;
    }
    r.gap = evaluator(z);
    r.gap_history.push_back(r.gap.value);
    if (r.gap.value <= params.epsilon) {
      r.status = RunStatus::kConverged;
      break;
    }
  }
  r.candidate = concat(x, y);
  finish(r, ledger);
  return r;
}

}  // namespace saddle
