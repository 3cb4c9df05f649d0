#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "saddle/dm.hpp"
#include "saddle/errors.hpp"

namespace saddle {

namespace {

Vec default_alphas(const VipInstance& vip, const Vec& dhat) {
  const std::size_t k = vip.blocks();
  Vec alphas(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) s += vip.lbar(i, j) * dhat[j];
    alphas[i] = s / dhat[i];
  }
  return alphas;
}

// Anchored extragradient on an uncoupled block until the residual certifies a
// gap contribution of at most `target` over the block's ball.
Vec solve_uncoupled_block(const VipInstance& vip, std::size_t i, double target, Ledger& ledger) {
  const ScaledMetric& pm = vip.metrics[i];
  const CompositeTerm& psi = vip.psis[i];
  const Vec v = vip.slice(vip.z0, i);
  const double L = vip.lipschitz(i, i);
  const double radius = vip.D[i];
  auto query = [&](const Vec& w) {
    Vec joint = vip.z0;
    vip.assign(joint, i, w);
    Vec g = vip.oracles[i](joint);
    ledger.record_query(i, joint, g);
    if (!all_finite(g)) throw NumericalError("uncoupled block: nonfinite operator value");
    return g;
  };
  Vec w = v;
  Vec g = query(w);
  double eta = L > 0.0 ? 1.0 / (2.0 * L) : radius / std::max(pm.dual_norm(g), 1e-300);
  Vec s = psi.subgradient(pm, w);
  for (std::size_t t = 0;; ++t) {
    // Monotonicity: <V(z), w - z> + psi(w) - psi(z) <= ||r||_* ||w - z||.
    const double r = pm.dual_norm(add(g, s));
    if (r * (pm.norm(sub(w, v)) + radius) <= target) return w;
    if (t > 500000) throw NumericalError("uncoupled block: no convergence");
    const double beta = 1.0 / (static_cast<double>(t) + 2.0);
    const Vec p = lincomb(1.0 - beta, w, beta, v);
    const Vec u = psi.prox(pm, lincomb(1.0, p, -eta, pm.apply_inverse(g)), eta);
    const Vec gu = query(u);
    Vec next = psi.prox(pm, lincomb(1.0, p, -eta, pm.apply_inverse(gu)), eta);
    s = lincomb(1.0 / eta, pm.apply(sub(p, next)), -1.0, gu);
    w = std::move(next);
    g = query(w);
  }
}

VipInstance restrict_blocks(const VipInstance& vip, const std::vector<std::size_t>& keep,
                            const Vec& fixed) {
  VipInstance r;
  r.kind = vip.kind + "/coupled";
  const std::size_t k = keep.size();
  r.lipschitz = Matrix(k, k);
  Vec z0;
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t i = keep[a];
    r.metrics.push_back(vip.metrics[i]);
    r.psis.push_back(vip.psis[i]);
    r.gradient_blocks.push_back(vip.gradient_blocks[i]);
    r.D.push_back(vip.D[i]);
    r.costs.push_back(i < vip.costs.size() ? vip.costs[i] : 1.0);
    for (std::size_t b = 0; b < k; ++b) r.lipschitz(a, b) = vip.lipschitz(i, keep[b]);
    const Vec part = vip.slice(vip.z0, i);
    z0.insert(z0.end(), part.begin(), part.end());
  }
  r.z0 = z0;
  auto embed = [vip_ptr = &vip, keep, fixed](const Vec& z) {
    Vec full = fixed;
    std::size_t off = 0;
    for (std::size_t i : keep) {
      const std::size_t d = vip_ptr->block_dim(i);
      vip_ptr->assign(full, i, Vec(z.begin() + static_cast<std::ptrdiff_t>(off),
                                   z.begin() + static_cast<std::ptrdiff_t>(off + d)));
      off += d;
    }
    return full;
  };
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t i = keep[a];
    r.oracles.push_back([vip_ptr = &vip, i, embed](const Vec& z) {
      return vip_ptr->oracles[i](embed(z));
    });
  }
  return r;
}

}  // namespace

MssOutput fds_solve(const MssTask& task, const std::vector<InnerSolver>& solvers,
                    Ledger& ledger) {
  if (!task.vip) throw StructuralError("fds_solve: task has no instance");
  const VipInstance& vip = *task.vip;
  const std::size_t k = vip.blocks();
  if (task.metric.blocks() != k || task.anchor.size() != vip.dim())
    throw StructuralError("fds_solve: task does not match the instance");
  Vec alphas(k);
  for (std::size_t i = 0; i < k; ++i) alphas[i] = task.metric.alpha(i);
  const double lbar_c = coupled_conditioning(vip, alphas);
  if (task.lambda < 2.0 * lbar_c * (1.0 - 1e-12))
    throw ParameterError("fds_solve: lambda " + std::to_string(task.lambda) +
                         " violates weak coupling, need >= " + std::to_string(2.0 * lbar_c));

  MssOutput out;
  out.z = task.anchor;
  out.subgradient.assign(vip.dim(), 0.0);
  out.inner_queries.assign(k, 0);
  out.certified.assign(k, false);
  out.arm_bounds.assign(k, -1.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double reg = alphas[i] * task.lambda;
    const Vec vi = vip.slice(task.anchor, i);
    MrnTask mt;
    mt.op = [&, i](const Vec& w) {
      Vec joint = task.anchor;
      vip.assign(joint, i, w);
      Vec g = vip.oracles[i](joint);
      ledger.record_query(i, joint, g);
      return g;
    };
    mt.psi = vip.psis[i].with_quadratic(reg, vi);
    mt.anchor = vi;
    mt.delta = reg / 2.0;
    mt.metric = vip.metrics[i];
    mt.mu = reg;
    mt.lipschitz = vip.lipschitz(i, i);

    InnerSolver which = i < solvers.size() ? solvers[i] : InnerSolver::kAuto;
    if (which == InnerSolver::kAuto)
      which = vip.gradient_blocks[i] ? InnerSolver::kArm : InnerSolver::kFeg;
    if (which == InnerSolver::kArm && !vip.gradient_blocks[i])
      throw ParameterError("fds_solve: ARM requires a gradient block");
    InnerResult res;
    if (which == InnerSolver::kArm) {
      const double xi = 2.0 * mt.delta / 3.0;
      res = arm_solve(mt, xi);
      out.arm_bounds[i] = arm_query_bound(mt.lipschitz, xi);
    } else {
      res = feg_solve(mt);
    }
    out.inner_queries[i] = res.queries;
    out.certified[i] = mrn_check_residual(mt, res.w, res.residual_bound).ok;
    // Remove the added regularizer from the subgradient.
    Vec psi_prime = res.subgradient;
    axpy(-reg, vip.metrics[i].apply(sub(res.w, vi)), psi_prime);
    vip.assign(out.z, i, res.w);
    vip.assign(out.subgradient, i, psi_prime);
  }
  return out;
}

DmResult rom_run(const VipInstance& vip, const DmParams& params, const MssSolver& solver,
                 Ledger& ledger, const GapOracle& gap, const RoundObserver& observer) {
  const std::size_t k = vip.blocks();
  if (params.alphas.size() != k) throw StructuralError("rom_run: one alpha per block");
  for (double a : params.alphas)
    if (!(a > 0.0)) throw ParameterError("rom_run: alphas must be positive");
  if (ledger.agents() != k) throw StructuralError("rom_run: ledger agent count");
  const AssembledMetric metric(vip.metrics, params.alphas);
  const double lambda_default =
      params.lambda > 0.0 ? params.lambda : 2.0 * coupled_conditioning(vip, params.alphas);
  const std::size_t stride = std::max<std::size_t>(1, params.gap_stride);

  DmResult r;
  r.alphas = params.alphas;
  r.lambda = lambda_default;
  r.min_a_lambda = std::numeric_limits<double>::infinity();
  Vec v = vip.z0;
  const Vec v0 = v;
  Vec avg(vip.dim(), 0.0);
  double a_sum = 0.0;
  Vec candidate = vip.z0;
  GapResult current = gap(candidate);
  double descent_lhs = 0.0;
  const std::optional<Vec>& ref = params.reference_solution;
  r.descent_checked = ref.has_value();
  if (ref && ref->size() != vip.dim()) throw StructuralError("rom_run: reference dimension");

  auto notify = [&]() {
    if (observer) observer(ledger, candidate);
  };
  auto done = [&](RunStatus s) {
    r.status = s;
    r.candidate = candidate;
    r.gap = current;
    r.rounds = ledger.round();
    r.queries = ledger.query_counts();
    r.weighted_cost = ledger.weighted_oracle_cost();
    if (!std::isfinite(r.min_a_lambda)) r.min_a_lambda = 0.0;
    return r;
  };

  for (std::size_t t = 0; ledger.round() + 2 <= params.max_rounds; ++t) {
    const double lambda = params.lambda_schedule ? params.lambda_schedule(t) : lambda_default;
    MssTask task{&vip, v, lambda, metric};
    MssOutput out = solver(task, ledger);
    for (std::size_t i = 0; i < k; ++i) {
      if (out.arm_bounds.size() == k && out.arm_bounds[i] >= 0.0) {
        ++r.arm_calls;
        r.arm_max_queries = std::max(r.arm_max_queries, out.inner_queries[i]);
        const double ratio = out.arm_bounds[i] > 0.0
                                 ? out.inner_queries[i] / out.arm_bounds[i]
                                 : (out.inner_queries[i] > 0 ? std::numeric_limits<double>::infinity() : 0.0);
        r.arm_worst_ratio = std::max(r.arm_worst_ratio, ratio);
      }
      if (i < out.certified.size() && !out.certified[i]) ++r.uncertified_blocks;
    }
    ledger.end_round();  // exchange z^{t+1}
    notify();
    if (t == 0) {
      r.gap_history.push_back(current.value);
      if (current.value <= params.epsilon) return done(RunStatus::kConverged);
    }

    const Vec& z = out.z;
    Vec vz(vip.dim());
    for (std::size_t i = 0; i < k; ++i) {
      Vec g = vip.oracles[i](z);
      vip.assign(vz, i, g);
      ledger.record_query(i, z, std::move(g));
    }
    ledger.end_round();  // exchange V_i(z^{t+1})

    const CheckResult mss = mss_check(task, z, vz, out.subgradient);
    if (!mss.ok)
      throw NumericalError("rom_run: subproblem criterion failed at iteration " +
                           std::to_string(t) + " (slack " + std::to_string(mss.slack) + ")");
    const Vec v_psi = add(vz, out.subgradient);
    const std::optional<double> a_opt = rom_stepsize(v_psi, v, z, metric);
    ++r.iterations;
    if (!a_opt) {
      candidate = z;
      current = gap(candidate);
      r.gap_history.push_back(current.value);
      r.note = "operator residual vanished: exact solution";
      notify();
      return done(RunStatus::kSolutionFound);
    }
    const double a = *a_opt;
    if (a * lambda < 1.0 - 1e-9)
      throw NumericalError("rom_run: step size below 1/lambda at iteration " + std::to_string(t));
    r.min_a_lambda = std::min(r.min_a_lambda, a * lambda);

    axpy(a, z, avg);
    a_sum += a;
    candidate = scaled(1.0 / a_sum, avg);
    if (ref) descent_lhs += a * dot(v_psi, sub(z, *ref));

    Vec next(vip.dim());
    for (std::size_t i = 0; i < k; ++i) {
      const Vec step = vip.metrics[i].apply_inverse(vip.slice(v_psi, i));
      const Vec trial = lincomb(1.0, vip.slice(v, i), -a / params.alphas[i], step);
      vip.assign(next, i, vip.psis[i].project_domain(vip.metrics[i], trial));
    }
    v = std::move(next);
    if (ref) {
      const double rhs = 0.5 * metric.sq_norm(sub(v0, *ref)) - 0.5 * metric.sq_norm(sub(v, *ref));
      r.descent_violation = std::max(r.descent_violation, descent_lhs - rhs);
    }

    RomIteration it;
    it.t = t;
    it.a = a;
    it.lambda = lambda;
    it.rounds = ledger.round();
    if ((t + 1) % stride == 0) {
      current = gap(candidate);
      r.gap_history.push_back(current.value);
      it.gap = current.value;
      r.history.push_back(it);
      notify();
      if (current.value <= params.epsilon) return done(RunStatus::kConverged);
    } else {
      it.gap = std::numeric_limits<double>::quiet_NaN();
      r.history.push_back(it);
      notify();
    }
  }
  current = gap(candidate);
  return done(current.value <= params.epsilon ? RunStatus::kConverged
                                              : RunStatus::kBudgetExhausted);
}

DmResult dm_vip_run(const VipInstance& vip, double epsilon, Ledger& ledger, DmParams params,
                    const GapOracle& gap_in, const RoundObserver& observer) {
  if (!(epsilon > 0.0)) throw ParameterError("dm_vip_run: epsilon must be positive");
  const std::size_t k = vip.blocks();
  if (k < 2) throw StructuralError("dm_vip_run: needs at least two blocks");
  if (ledger.agents() != k) throw StructuralError("dm_vip_run: ledger agent count");
  params.epsilon = epsilon;
  const Vec dhat = params.dhat.empty() ? vip.D : params.dhat;
  if (dhat.size() != k) throw StructuralError("dm_vip_run: one distance estimate per block");
  if (params.alphas.empty()) params.alphas = default_alphas(vip, dhat);

  std::unique_ptr<VipGapEvaluator> owned;
  GapOracle gap = gap_in;
  if (!gap) {
    owned = std::make_unique<VipGapEvaluator>(vip, default_domain(vip));
    gap = [&](const Vec& z) { return (*owned)(z); };
  }
  if (!params.reference_solution && vip.solution) params.reference_solution = vip.solution;

  std::vector<std::size_t> coupled;
  std::vector<bool> decoupled(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    decoupled[i] = !(params.alphas[i] > 0.0);
    if (!decoupled[i]) coupled.push_back(i);
  }
  const std::vector<InnerSolver> solvers = params.solvers;
  MssSolver fds = [solvers](const MssTask& task, Ledger& l) { return fds_solve(task, solvers, l); };

  if (coupled.size() == k) {
    DmResult r = rom_run(vip, params, fds, ledger, gap, observer);
    r.decoupled = decoupled;
    return r;
  }

  // Uncoupled blocks are solved locally during the first round and held
  // fixed; only the coupled blocks run the outer loop.
  Vec fixed = vip.z0;
  const double target = epsilon / (4.0 * static_cast<double>(k));
  for (std::size_t i = 0; i < k; ++i)
    if (decoupled[i]) vip.assign(fixed, i, solve_uncoupled_block(vip, i, target, ledger));

  if (coupled.empty()) {
    ledger.end_round();
    DmResult r;
    r.candidate = fixed;
    r.gap = gap(fixed);
    r.gap_history.push_back(r.gap.value);
    r.status = r.gap.value <= epsilon ? RunStatus::kConverged : RunStatus::kBudgetExhausted;
    r.rounds = ledger.round();
    r.queries = ledger.query_counts();
    r.weighted_cost = ledger.weighted_oracle_cost();
    r.alphas = params.alphas;
    r.decoupled = decoupled;
    r.note = "no coupling: blocks solved locally";
    if (observer) observer(ledger, fixed);
    return r;
  }

  // Coupled oracles never read an uncoupled block, so the sub-problem and
  // its replayed query points keep those blocks at z0: the other agents
  // have not received the local solutions when they query.
  for (std::size_t i : coupled)
    for (std::size_t j = 0; j < k; ++j)
      if (decoupled[j] && vip.lbar(i, j) > 0.0)
        throw ParameterError("dm_vip_run: alpha_" + std::to_string(j) +
                             " = 0 but the block is coupled to block " + std::to_string(i));
  const VipInstance sub_vip = restrict_blocks(vip, coupled, vip.z0);
  auto embed_into = [&](const Vec& base, const Vec& z) {
    Vec full = base;
    std::size_t off = 0;
    for (std::size_t i : coupled) {
      const std::size_t d = vip.block_dim(i);
      vip.assign(full, i, Vec(z.begin() + static_cast<std::ptrdiff_t>(off),
                              z.begin() + static_cast<std::ptrdiff_t>(off + d)));
      off += d;
    }
    return full;
  };
  auto embed = [&](const Vec& z) { return embed_into(fixed, z); };
  auto embed_query = [&](const Vec& z) { return embed_into(vip.z0, z); };
  DmParams sub_params = params;
  sub_params.alphas.clear();
  for (std::size_t i : coupled) sub_params.alphas.push_back(params.alphas[i]);
  if (!params.solvers.empty()) {
    sub_params.solvers.clear();
    for (std::size_t i : coupled) sub_params.solvers.push_back(params.solvers[i]);
  }
  if (params.reference_solution) {
    Vec ref;
    for (std::size_t i : coupled) {
      const Vec part = vip.slice(*params.reference_solution, i);
      ref.insert(ref.end(), part.begin(), part.end());
    }
    sub_params.reference_solution = ref;
  }
  // The sub-run records into its own ledger, replayed into the caller's with
  // the original agent indices and full joint points.
  Ledger sub_ledger(coupled.size(), sub_vip.costs, true);
  DmResult r = rom_run(sub_vip, sub_params, fds, sub_ledger,
                       [&](const Vec& z) { return gap(embed(z)); }, {});
  for (std::size_t round = 0; round < sub_ledger.trace_rounds(); ++round) {
    for (std::size_t a = 0; a < coupled.size(); ++a)
      for (const QueryRecord& q : sub_ledger.trace(round, a))
        ledger.record_query(coupled[a], embed_query(q.point), q.response);
    if (round < sub_ledger.round()) {
      ledger.end_round();
      if (observer) observer(ledger, embed(r.candidate));
    }
  }
  r.candidate = embed(r.candidate);
  r.rounds = ledger.round();
  r.queries = ledger.query_counts();
  r.weighted_cost = ledger.weighted_oracle_cost();
  r.alphas = params.alphas;
  r.decoupled = decoupled;
  r.note = "uncoupled blocks solved locally";
  return r;
}

DmResult dm_sp_run(const SaddleInstance& sp, double epsilon, double dhat_x, double dhat_y,
                   Ledger& ledger, DmParams params, const RoundObserver& observer) {
  if (!(dhat_x > 0.0 && dhat_y > 0.0))
    throw ParameterError("dm_sp_run: distance estimates must be positive");
  const VipInstance vip = as_vip(sp);
  const double lxy = sp.declared.L_xy;
  if (params.alphas.empty()) params.alphas = {lxy * dhat_y / dhat_x, lxy * dhat_x / dhat_y};
  if (params.lambda <= 0.0 && !params.lambda_schedule) params.lambda = 2.0;
  params.dhat = {dhat_x, dhat_y};
  if (!params.reference_solution) params.reference_solution = sp.known_solution();
  SaddleGapEvaluator evaluator(sp, default_domain(sp));
  return dm_vip_run(vip, epsilon, ledger, params,
                    [&](const Vec& z) { return evaluator(z); }, observer);
}

}  // namespace saddle
