#include <cmath>

#include "saddle/dm.hpp"
#include "saddle/errors.hpp"

namespace saddle {

CheckResult mss_check(const MssTask& task, const Vec& z, const Vec& v_at_z,
                      const Vec& psi_prime) {
  const AssembledMetric& m = task.metric;
  if (z.size() != m.dim() || v_at_z.size() != m.dim() || psi_prime.size() != m.dim() ||
      task.anchor.size() != m.dim())
    throw StructuralError("mss_check: dimension mismatch");
  const Vec d = sub(z, task.anchor);
  Vec r = add(v_at_z, psi_prime);
  axpy(task.lambda, m.apply(d), r);
  const double lhs = m.dual_norm(r);
  const double rhs = task.lambda * m.norm(d);
  return CheckResult{lhs <= rhs + kCriterionTolerance, lhs - rhs};
}

CheckResult mss_check(const MssTask& task, const Vec& z, const Vec& psi_prime) {
  if (!task.vip) throw StructuralError("mss_check: task has no operator");
  return mss_check(task, z, task.vip->evaluate(z), psi_prime);
}

CheckResult mrn_check_residual(const MrnTask& task, const Vec& w, double residual_norm) {
  const double rhs = task.delta * task.metric.norm(sub(w, task.anchor));
  return CheckResult{residual_norm <= rhs + kCriterionTolerance, residual_norm - rhs};
}

CheckResult mrn_check(const MrnTask& task, const Vec& w, const Vec& v_at_w,
                      const Vec& psi_prime) {
  if (w.size() != task.metric.dim() || v_at_w.size() != w.size() || psi_prime.size() != w.size())
    throw StructuralError("mrn_check: dimension mismatch");
  return mrn_check_residual(task, w, task.metric.dual_norm(add(v_at_w, psi_prime)));
}

std::optional<double> rom_stepsize(const Vec& v_psi, const Vec& v, const Vec& z,
                                   const AssembledMetric& metric) {
  const double sq = metric.sq_dual_norm(v_psi);
  if (std::sqrt(sq) <= 1e-14) return std::nullopt;
  return 2.0 * dot(v_psi, sub(v, z)) / sq;
}

double coupled_conditioning(const VipInstance& vip, const Vec& alphas) {
  const std::size_t k = vip.blocks();
  if (alphas.size() != k) throw StructuralError("coupled_conditioning: one alpha per block");
  double worst = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    if (!(alphas[j] > 0.0)) continue;
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == j || vip.lbar(i, j) == 0.0) continue;
      double inner = 0.0;
      for (std::size_t l = 0; l < k; ++l)
        if (l != i) inner += vip.lbar(i, l) * vip.D[l];
      s += vip.lbar(i, j) * inner / alphas[i];
    }
    worst = std::max(worst, s / (alphas[j] * vip.D[j]));
  }
  return std::sqrt(worst);
}

}  // namespace saddle
