#include <algorithm>
#include <cmath>
#include <string>

#include "saddle/dm.hpp"
#include "saddle/errors.hpp"

namespace saddle {

std::size_t ArmSchedule::total_steps() const {
  std::size_t s = 0;
  for (std::size_t n : steps) s += n;
  return s;
}

ArmSchedule make_arm_schedule(double lipschitz, double xi) {
  if (!(xi > 0.0)) throw ParameterError("arm: xi must be positive");
  if (!(lipschitz >= 0.0)) throw ParameterError("arm: L must be nonnegative");
  // smallest m >= 0 with 4^m >= 3L/(2 xi), by integer search to avoid log
  // rounding at exact powers of four
  const double ratio = 3.0 * lipschitz / (2.0 * xi);
  std::size_t m = 0;
  for (double p = 1.0; p < ratio; p *= 4.0) ++m;
  ArmSchedule s;
  s.tau = 2 + m;
  for (std::size_t k = 1; k <= s.tau; ++k) {
    const double sigma = std::pow(4.0, static_cast<double>(k) - 3.0) * (2.0 * xi / 3.0);
    s.sigma.push_back(sigma);
    const double n = std::ceil(16.0 * std::sqrt(lipschitz / sigma));
    s.steps.push_back(static_cast<std::size_t>(std::max(1.0, n)));
    s.lipschitz.push_back(lipschitz + sigma);
  }
  return s;
}

double arm_query_bound(double lipschitz, double xi) {
  return 34.0 * std::sqrt(3.0 * lipschitz / (2.0 * xi));
}

InnerResult arm_solve(const MrnTask& task, double xi) {
  const ScaledMetric& pm = task.metric;
  const Vec& v = task.anchor;
  if (v.size() != pm.dim()) throw StructuralError("arm_solve: anchor dimension");
  const double L = task.lipschitz;
  const ArmSchedule sched = make_arm_schedule(L, xi);

  InnerResult out;
  Vec cached;
  auto gradient = [&](const Vec& y) {
    if (L == 0.0 && !cached.empty()) return cached;
    Vec g = task.op(y);
    ++out.queries;
    if (!all_finite(g)) throw NumericalError("arm_solve: nonfinite gradient");
    if (L == 0.0) cached = g;
    return g;
  };

  Vec wbar = v, w = v;
  double sigma_prev = 0.0;
  double half_first_step = -1.0;
  for (std::size_t k = 0; k < sched.tau; ++k) {
    const double sigma = sched.sigma[k];
    const double lk = sched.lipschitz[k];
    const double gamma = 1.0 - sigma_prev / sigma;
    wbar = lincomb(1.0 - gamma, wbar, gamma, w);
    Vec x = w, y = w;
    double t = 1.0;
    for (std::size_t i = 0; i < sched.steps[k]; ++i) {
      const Vec reg = pm.apply(sub(y, wbar));
      Vec gk = gradient(y);
      axpy(sigma, reg, gk);
      Vec x_next = task.psi.prox(pm, lincomb(1.0, y, -1.0 / lk, pm.apply_inverse(gk)), 1.0 / lk);
      if (!all_finite(x_next)) throw NumericalError("arm_solve: nonfinite iterate");
      const Vec step = sub(x_next, y);
      const Vec pstep = pm.apply(step);
      // psi'(x_next) = -grad f^(k)(y) - L_k P (x_next - y)
      out.subgradient = lincomb(-1.0, gk, -lk, pstep);
      out.w = x_next;
      // ||grad f(x) + psi'(x)|| <= L||x - y|| + ||sigma P(y - wbar) + L_k P(x - y)||_*
      out.residual_bound = L * pm.norm(step) + pm.dual_norm(lincomb(sigma, reg, lk, pstep));
      if (half_first_step < 0.0) half_first_step = 0.5 * pm.norm(sub(v, x_next));
      // Lower bounds on the distance from v to a solution: the first step is
      // a nonexpansive prox-gradient map applied to v, and strong
      // monotonicity localizes the solution around x_next.
      double rho = half_first_step;
      if (task.mu > 0.0)
        rho = std::max(rho, pm.norm(sub(x_next, v)) - out.residual_bound / task.mu);
      if (out.residual_bound <= xi * rho) {
        out.early_exit = true;
        return out;
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      y = lincomb(1.0, x_next, (t - 1.0) / t_next, sub(x_next, x));
      x = std::move(x_next);
      t = t_next;
    }
    w = x;
    sigma_prev = sigma;
  }
  return out;
}

InnerResult feg_solve(const MrnTask& task, std::size_t max_queries) {
  const ScaledMetric& pm = task.metric;
  const Vec& v = task.anchor;
  if (v.size() != pm.dim()) throw StructuralError("feg_solve: anchor dimension");
  double eta;
  if (task.lipschitz > 0.0) eta = 1.0 / (2.0 * task.lipschitz);
  else if (task.mu > 0.0) eta = 1.0 / task.mu;
  else throw ParameterError("feg_solve: needs L > 0 or mu > 0");

  InnerResult out;
  auto query = [&](const Vec& p) {
    Vec g = task.op(p);
    ++out.queries;
    if (!all_finite(g)) throw NumericalError("feg_solve: nonfinite operator value");
    return g;
  };
  Vec w = v;
  Vec g = query(w);
  Vec s = task.psi.subgradient(pm, w);
  for (std::size_t t = 0;; ++t) {
    const double residual = pm.dual_norm(add(g, s));
    if (mrn_check_residual(task, w, residual).ok) {
      out.w = std::move(w);
      out.subgradient = std::move(s);
      out.residual_bound = residual;
      out.early_exit = true;
      return out;
    }
    if (out.queries + 2 > max_queries)
      throw NumericalError("feg_solve: query cap reached with residual " +
                           std::to_string(residual));
    const double beta = 1.0 / (static_cast<double>(t) + 2.0);
    const Vec p = lincomb(1.0 - beta, w, beta, v);
    const Vec u = task.psi.prox(pm, lincomb(1.0, p, -eta, pm.apply_inverse(g)), eta);
    const Vec gu = query(u);
    Vec next = task.psi.prox(pm, lincomb(1.0, p, -eta, pm.apply_inverse(gu)), eta);
    s = lincomb(1.0 / eta, pm.apply(sub(p, next)), -1.0, gu);
    w = std::move(next);
    g = query(w);
  }
}

}  // namespace saddle
