#include "saddle/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <random>

#include "saddle/baseline.hpp"
#include "saddle/dm.hpp"
#include "saddle/evaluation.hpp"
#include "saddle/hard_instances.hpp"
#include "saddle/ledger.hpp"
#include "saddle/problems.hpp"

namespace saddle {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vec random_weights(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 3.0);
  Vec w(n);
  for (double& v : w) v = u(rng);
  return w;
}

SuiteOutcome metric_norms(Rng& rng) {
  const std::vector<ScaledMetric> metrics{ScaledMetric(random_weights(3, rng)),
                                          ScaledMetric(random_weights(2, rng)),
                                          ScaledMetric(random_weights(4, rng))};
  const AssembledMetric m(metrics, random_weights(3, rng));
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec z = random_gaussian(m.dim(), rng), g = random_gaussian(m.dim(), rng);
    double expanded = 0.0;
    for (std::size_t i = 0; i < m.blocks(); ++i)
      expanded += m.alpha(i) * m.block(i).metric.sq_norm(m.slice(z, i));
    const double sq = m.sq_norm(z);
    worst = std::max(worst, std::abs(sq - expanded) / std::max(1.0, expanded));
    worst = std::max(worst, std::abs(sq - dot(m.apply(z), z)) / std::max(1.0, sq));
    if (std::abs(dot(g, z)) > m.norm(z) * m.dual_norm(g) * (1.0 + 1e-12))
      return {"metric-norms", false, "Cauchy-Schwarz violated"};
    const double pz = m.dual_norm(m.apply(z)), nz = m.norm(z);
    worst = std::max(worst, std::abs(pz - nz) / std::max(1.0, nz));
  }
  return {"metric-norms", worst <= 1e-12, fmt("worst relative deviation %.3g", worst)};
}

std::vector<SaddleInstance> sample_saddles(Rng& rng) {
  std::vector<SaddleInstance> out;
  out.push_back(random_bilinear(4, 3, 1.5, 1.0, 2.0, rng));
  out.push_back(random_quadratic_saddle(5, 4, 2.0, 1.0, 0.5, 1.0, 1.0, rng));
  out.push_back(make_weakly_coupled_scsc(1.0, 2.0, 0.3, 3));
  return out;
}

SuiteOutcome monotone_lipschitz(Rng& rng) {
  double worst_mono = 0.0, worst_lip = 0.0;
  for (const SaddleInstance& sp : sample_saddles(rng)) {
    const VipInstance vip = as_vip(sp);
    const SaddleParams& d = sp.declared;
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec x = random_gaussian(sp.nx(), rng), x2 = random_gaussian(sp.nx(), rng);
      const Vec y = random_gaussian(sp.ny(), rng), y2 = random_gaussian(sp.ny(), rng);
      const Vec z = concat(x, y), z2 = concat(x2, y2);
      worst_mono = std::min(worst_mono, dot(sub(vip.evaluate(z), vip.evaluate(z2)), sub(z, z2)));
      const double dx = sp.metric_x.norm(sub(x, x2)), dy = sp.metric_y.norm(sub(y, y2));
      auto excess = [](double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, rhs); };
      worst_lip = std::max(worst_lip, excess(sp.metric_x.dual_norm(sub(sp.grad_x(x, y), sp.grad_x(x2, y))), d.L_x * dx));
      worst_lip = std::max(worst_lip, excess(sp.metric_x.dual_norm(sub(sp.grad_x(x, y), sp.grad_x(x, y2))), d.L_xy * dy));
      worst_lip = std::max(worst_lip, excess(sp.metric_y.dual_norm(sub(sp.grad_y(x, y), sp.grad_y(x2, y))), d.L_xy * dx));
      worst_lip = std::max(worst_lip, excess(sp.metric_y.dual_norm(sub(sp.grad_y(x, y), sp.grad_y(x, y2))), d.L_y * dy));
    }
  }
  const VipInstance poly = random_polymatrix({2, 3, 2}, 1.0, 0.5, Vec{1.0, 1.0, 1.0}, rng);
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec z = random_gaussian(poly.dim(), rng), z2 = random_gaussian(poly.dim(), rng);
    worst_mono = std::min(worst_mono, dot(sub(poly.evaluate(z), poly.evaluate(z2)), sub(z, z2)));
    for (std::size_t j = 0; j < poly.blocks(); ++j) {
      Vec zj = z;
      poly.assign(zj, j, poly.slice(z2, j));
      const double dj = poly.metrics[j].norm(sub(poly.slice(z, j), poly.slice(z2, j)));
      for (std::size_t i = 0; i < poly.blocks(); ++i) {
        const double lhs = poly.metrics[i].dual_norm(sub(poly.oracles[i](z), poly.oracles[i](zj)));
        const double rhs = poly.lipschitz(i, j) * dj;
        worst_lip = std::max(worst_lip, (lhs - rhs) / std::max(1.0, rhs));
      }
    }
  }
  const bool ok = worst_mono >= -1e-10 && worst_lip <= 1e-8;
  return {"monotone-lipschitz", ok,
          fmt("min monotonicity product %.3g, worst Lipschitz excess %.3g", worst_mono, worst_lip)};
}

SuiteOutcome prox_feasibility(Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const ScaledMetric m(random_weights(n, rng));
    const Vec c = random_gaussian(n, rng);
    Vec lo = c, hi = c;
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] -= u(rng);
      hi[i] += u(rng);
    }
    const CompositeTerm terms[] = {
        CompositeTerm::zero(), CompositeTerm::ball(c, u(rng)), CompositeTerm::box(lo, hi),
        CompositeTerm::quadratic(u(rng), c),
        CompositeTerm::sum(CompositeTerm::quadratic(u(rng), random_gaussian(n, rng)),
                           CompositeTerm::ball(c, u(rng)))};
    for (const CompositeTerm& t : terms) {
      const Vec v = scaled(3.0, random_gaussian(n, rng));
      const double step = u(rng);
      const Vec p = t.prox(m, v, step);
      if (!t.in_domain(m, p)) return {"prox", false, "prox left dom psi for " + t.kind_name()};
      // Optimality: P (v - p) / step must be a subgradient of psi at p.
      const Vec g = scaled(1.0 / step, m.apply(sub(v, p)));
      if (!t.is_subgradient(m, p, g, 1e-10))
        return {"prox", false, "optimality residual above 1e-10 for " + t.kind_name()};
    }
  }
  return {"prox", true, "2000 prox evaluations feasible and optimal"};
}

SuiteOutcome gradient_span(Rng& rng) {
  const SaddleInstance sp = random_quadratic_saddle(4, 3, 1.0, 1.0, 1.0, 1.0, 1.0, rng);
  const VipInstance vip = as_vip(sp);
  std::string failure;
  std::size_t checked = 0;
  auto audit = [&](const Ledger& ledger, const char* who) {
    const SpanAudit a = audit_gradient_span(ledger, vip.metrics, vip.z0);
    checked += a.checked;
    if (!a.ok && failure.empty()) failure = std::string(who) + ": " + a.first_failure;
  };
  // Candidates may use everything exchanged before the current round ends.
  auto candidate_check = [&](const Ledger& ledger, const Vec& c, const char* who) {
    for (std::size_t i = 0; i < 2; ++i) {
      ++checked;
      const SpanCheck s = verify_gradient_span(ledger, i, vip.slice(c, i), vip.slice(vip.z0, i),
                                               vip.metrics[i]);
      if (!s.ok && failure.empty()) failure = std::string(who) + ": candidate outside span";
    }
  };
  {
    Ledger ledger(2);
    EgParams p;
    p.max_rounds = 30;
    p.epsilon = 1e-12;
    const RunResult r = eg_run(sp, p, ledger);
    audit(ledger, "eg");
    candidate_check(ledger, r.candidate, "eg");
  }
  {
    Ledger ledger(2);
    DmParams p;
    p.max_rounds = 12;
    const DmResult r = dm_sp_run(sp, 1e-12, 1.0, 1.0, ledger, p,
                                 [&](const Ledger& l, const Vec& c) { candidate_check(l, c, "dm"); });
    audit(ledger, "dm");
    candidate_check(ledger, r.candidate, "dm");
  }
  {
    Ledger ledger(2);
    DgdaParams p;
    p.max_rounds = 20;
    p.tau = 3;
    p.epsilon = 1e-12;
    const RunResult r = dgda_run(sp, p, ledger);
    audit(ledger, "dgda");
    candidate_check(ledger, r.candidate, "dgda");
  }
  if (!failure.empty()) return {"gradient-span", false, failure};
  return {"gradient-span", true, fmt("%.0f query points and candidates in span", double(checked))};
}

SuiteOutcome round_structure(Rng& rng) {
  const SaddleInstance sp = random_bilinear(5, 4, 1.0, 1.0, 1.0, rng);
  for (double eps : {0.2, 0.05, 1e-9}) {
    Ledger ledger(2);
    DmParams p;
    p.max_rounds = 40;
    const DmResult r = dm_sp_run(sp, eps, 1.0, 1.0, ledger, p);
    const bool first_round_exit = r.iterations == 0 && r.rounds == 1;
    if (!first_round_exit && r.rounds != 2 * r.iterations)
      return {"round-structure", false, fmt("dm: %.0f rounds for %.0f iterations", double(r.rounds), double(r.iterations))};
  }
  Ledger ledger(2);
  EgParams p;
  p.max_rounds = 20;
  p.epsilon = 1e-12;
  eg_run(sp, p, ledger);
  if (ledger.round() % 2 != 0) return {"round-structure", false, "eg: odd round count"};
  for (std::size_t t = 0; t < ledger.round(); ++t)
    for (std::size_t i = 0; i < 2; ++i)
      if (ledger.trace(t, i).size() != 1) return {"round-structure", false, "eg: round without exactly one query per agent"};
  return {"round-structure", true, "dm rounds = 2T, eg one query per agent per round"};
}

SuiteOutcome replay_determinism(std::uint64_t seed) {
  auto trace = [&]() {
    Rng rng(seed);
    const SaddleInstance sp = random_quadratic_saddle(4, 4, 2.0, 1.0, 2.0, 1.0, 1.0, rng);
    Ledger ledger(2);
    DmParams p;
    p.max_rounds = 10;
    dm_sp_run(sp, 1e-9, 1.0, 1.0, ledger, p);
    return ledger.to_csv();
  };
  const std::string a = trace(), b = trace();
  return {"replay-determinism", a == b && !a.empty(), a == b ? "identical traces" : "traces differ"};
}

SuiteOutcome fds_criterion(Rng& rng) {
  std::vector<VipInstance> vips;
  vips.push_back(as_vip(random_quadratic_saddle(4, 3, 2.0, 1.0, 3.0, 1.0, 1.0, rng)));
  vips.push_back(random_polymatrix({2, 2, 3}, 1.0, 0.5, Vec{1.0, 1.0, 1.0}, rng));
  std::size_t checked = 0;
  double worst = -1e300;
  for (const VipInstance& vip : vips) {
    Vec couple(vip.blocks());
    for (std::size_t i = 0; i < vip.blocks(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < vip.blocks(); ++j)
        if (j != i) s += vip.lbar(i, j) * vip.D[j];
      couple[i] = s / vip.D[i];
    }
    const AssembledMetric metric(vip.metrics, couple);
    const double lambda = 2.0 * coupled_conditioning(vip, couple);
    for (int trial = 0; trial < 60; ++trial) {
      MssTask task{&vip, scaled(2.0, random_gaussian(vip.dim(), rng)), lambda, metric};
      Ledger ledger(vip.blocks(), {}, false);
      const MssOutput out = fds_solve(task, {}, ledger);
      const CheckResult c = mss_check(task, out.z, out.subgradient);
      worst = std::max(worst, c.slack);
      ++checked;
      if (!c.ok) return {"fds-criterion", false, fmt("criterion slack %.3g", c.slack)};
    }
  }
  return {"fds-criterion", true, fmt("%.0f solves, worst slack %.3g", double(checked), worst)};
}

SuiteOutcome arm_budget(Rng& rng) {
  std::uniform_real_distribution<double> u(0.5, 5.0);
  for (double xi : {1.0, 0.1, 0.01}) {
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 3 + 4 * trial;
      Vec spec(n);
      for (double& s : spec) s = u(rng);
      const Matrix h = random_psd(n, spec, rng);
      const Vec c = random_gaussian(n, rng);
      MrnTask task;
      task.op = [&](const Vec& w) { return add(h.apply(w), c); };
      task.psi = CompositeTerm::zero();
      task.anchor = random_gaussian(n, rng);
      task.metric = ScaledMetric(n);
      task.lipschitz = *std::max_element(spec.begin(), spec.end());
      task.mu = *std::min_element(spec.begin(), spec.end());
      const InnerResult r = arm_solve(task, xi);
      const double bound = arm_query_bound(task.lipschitz, xi);
      if (static_cast<double>(r.queries) > bound)
        return {"arm-budget", false, fmt("%.0f queries above bound %.1f", double(r.queries), bound)};
    }
  }
  return {"arm-budget", true, "all calls within the query bound"};
}

SuiteOutcome ergodic_average(Rng& rng) {
  const SaddleInstance sp = random_bilinear(3, 3, 1.0, 1.0, 1.0, rng);
  Ledger ledger(2);
  DmParams p;
  p.max_rounds = 16;
  const DmResult r = dm_sp_run(sp, 1e-12, 1.0, 1.0, ledger, p);
  Vec avg(sp.nx() + sp.ny(), 0.0);
  double total = 0.0;
  for (const RomIteration& it : r.history) {
    // Round 2t+1 carries the operator queries at z^{t+1}.
    const Vec& z = ledger.trace(2 * it.t + 1, 0).front().point;
    axpy(it.a, z, avg);
    total += it.a;
  }
  const double dev = norm2(sub(scaled(1.0 / total, avg), r.candidate));
  return {"ergodic-average", dev <= 1e-12 * (1.0 + norm2(r.candidate)), fmt("recomputation deviation %.3g", dev)};
}

SuiteOutcome construction(Rng&) {
  // L = 2 leaves the difference matrix unscaled.
  for (std::size_t k = 1; k <= 6; ++k) {
    const KrylovInstance inst = worst_case_instance(2.0, 1.0, k, 2 * k + 3, 2 * k + 2);
    const Matrix g = inst.a.transpose() * inst.a;
    for (std::size_t i = 0; i < inst.p; ++i)
      for (std::size_t j = 0; j < inst.p; ++j) {
        const double want = i == j ? 2.0 : (i + 1 == j || j + 1 == i ? -1.0 : 0.0);
        if (g(i, j) != want) return {"construction", false, "B'B differs from the tridiagonal matrix"};
      }
    for (std::size_t kk = 1; kk <= k; ++kk) {
      const KrylovBasis basis = KrylovBasis::x_side(inst.a, inst.b, kk);
      if (basis.size() != kk) return {"construction", false, "Krylov dimension below k"};
      for (const Vec& e : basis.vectors())
        for (std::size_t i = kk; i < e.size(); ++i)
          if (std::abs(e[i]) > 1e-12) return {"construction", false, "Krylov basis leaves leading coordinates"};
    }
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t kk = 0; kk <= inst.p; ++kk) {
      const double res = krylov_min_residual(inst, kk);
      if (res > prev * (1.0 + 1e-12) + 1e-15) return {"construction", false, "Krylov residual increased with k"};
      prev = res;
    }
  }
  return {"construction", true, "tridiagonal structure, leading-coordinate spans, monotone residuals"};
}

SuiteOutcome gap_checks(Rng& rng) {
  double worst_neg = 0.0;
  for (const SaddleInstance& sp : sample_saddles(rng)) {
    const SaddleGapEvaluator gap(sp, default_domain(sp));
    for (int trial = 0; trial < 50; ++trial) {
      const Vec z = concat(random_on_sphere(sp.nx(), 0.5, rng), random_on_sphere(sp.ny(), 0.5, rng));
      worst_neg = std::min(worst_neg, gap(add(sp.z0(), z)).value);
    }
  }
  if (worst_neg < -1e-10) return {"gap", false, fmt("negative gap %.3g", worst_neg)};
  const SaddleInstance bil = random_bilinear(4, 4, 1.0, 1.0, 1.0, rng);
  const SaddleGapEvaluator exact(bil, default_domain(bil), true);
  const SaddleGapEvaluator est(bil, default_domain(bil), false);
  double worst_rel = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Vec z = random_gaussian(8, rng);
    const double e = exact(z).value, s = est(z).value;
    worst_rel = std::max(worst_rel, std::abs(e - s) / std::max(1e-12, std::abs(e)));
  }
  return {"gap", worst_rel <= 1e-4,
          fmt("min gap %.3g, estimator relative error %.3g", worst_neg, worst_rel)};
}

SuiteOutcome bounds_sanity(Rng& rng) {
  std::uniform_real_distribution<double> lg(-2.0, 2.0);
  auto draw = [&]() { return std::pow(10.0, lg(rng)); };
  for (int trial = 0; trial < 1000; ++trial) {
    BoundsInput in;
    in.L_x = draw();
    in.L_xy = draw();
    in.L_y = draw();
    in.D_x = draw();
    in.D_y = draw();
    in.Dhat_x = draw();
    in.Dhat_y = draw();
    in.c_x = draw();
    in.c_y = draw();
    in.epsilon = draw() * 1e-2;
    const BoundsReport b = complexity_bounds(in);
    if (b.theta < 2.0 - 1e-12) return {"bounds", false, "theta below 2"};
    if (b.dmsp_comm < b.lower_comm) return {"bounds", false, "upper communication bound below lower"};
    for (double v : {b.dmsp_comm, b.dmsp_oracle, b.eg_comm, b.eg_oracle, b.cat_eg_comm, b.catcat_comm,
                     b.lower_comm, b.lower_oracle})
      if (!std::isfinite(v) || v < 0.0) return {"bounds", false, "nonfinite or negative bound"};
  }
  return {"bounds", true, "1000 random parameter tuples"};
}

SuiteOutcome dgda_behavior(Rng&) {
  const SaddleInstance weak = make_weakly_coupled_scsc(1.0, 1.0, 0.1, 3);
  Ledger ledger(2);
  DgdaParams p;
  p.eta_x = p.eta_y = 0.5;
  p.max_rounds = 30;
  p.epsilon = 1e-300;
  dgda_run(weak, p, ledger);
  const Vec star = *weak.known_solution();
  double worst_ratio = 0.0, prev = -1.0;
  for (std::size_t t = 0; t < ledger.round(); ++t) {
    const double d = norm2(sub(ledger.trace(t, 0).front().point, star));
    if (d < 1e-12) break;
    if (prev > 0.0) worst_ratio = std::max(worst_ratio, d / prev);
    prev = d;
  }
  if (!(worst_ratio < 1.0)) return {"dgda", false, fmt("distance ratio %.3g per round", worst_ratio)};
  const SaddleInstance strong = make_weakly_coupled_scsc(1.0, 1.0, 2.0, 3);
  Ledger l2(2);
  DgdaParams q;
  q.eta_x = q.eta_y = 0.5;
  q.max_rounds = 2000;
  const RunResult r = dgda_run(strong, q, l2);
  return {"dgda", r.status == RunStatus::kDiverged,
          fmt("worst contraction %.3g; strong coupling diverged = %.0f", worst_ratio,
              r.status == RunStatus::kDiverged ? 1.0 : 0.0)};
}

}  // namespace

std::vector<SuiteOutcome> run_invariant_suites(std::uint64_t seed) {
  const std::vector<std::pair<const char*, std::function<SuiteOutcome(Rng&)>>> suites{
      {"metric-norms", metric_norms},
      {"monotone-lipschitz", monotone_lipschitz},
      {"prox", prox_feasibility},
      {"gradient-span", gradient_span},
      {"round-structure", round_structure},
      {"replay-determinism", [seed](Rng&) { return replay_determinism(seed); }},
      {"fds-criterion", fds_criterion},
      {"arm-budget", arm_budget},
      {"ergodic-average", ergodic_average},
      {"construction", construction},
      {"gap", gap_checks},
      {"bounds", bounds_sanity},
      {"dgda", dgda_behavior},
  };
  std::vector<SuiteOutcome> out;
  std::size_t index = 0;
  for (const auto& [name, suite] : suites) {
    Rng rng(seed * 1000003u + index++);
    try {
      out.push_back(suite(rng));
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  }
  return out;
}

}  // namespace saddle
