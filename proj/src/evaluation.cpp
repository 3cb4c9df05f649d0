#include "saddle/evaluation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle/errors.hpp"

namespace saddle {

namespace {

constexpr int kEstimateSteps = 500;
constexpr double kInf = std::numeric_limits<double>::infinity();

Vec project_ball(const ScaledMetric& m, const Vec& center, double radius, const Vec& v) {
  Vec d = sub(v, center);
  const double n = m.norm(d);
  if (n <= radius) return v;
  return lincomb(1.0, center, radius / n, d);
}

// P-metric projection onto ball(center, radius) cap dom psi. Dykstra's
// alternating projections when psi restricts the domain.
Vec project_feasible(const ScaledMetric& m, const CompositeTerm& psi, const Vec& center,
                     double radius, const Vec& v) {
  const CompositeTerm& base = psi.base();
  if (!base.is_indicator()) return project_ball(m, center, radius, v);
  Vec x = v;
  Vec p(v.size(), 0.0), q(v.size(), 0.0);
  for (int it = 0; it < 500; ++it) {
    Vec y = project_ball(m, center, radius, add(x, p));
    p = sub(add(x, p), y);
    Vec xn = base.project_domain(m, add(y, q));
    q = sub(add(y, q), xn);
    const double change = m.norm(sub(xn, x));
    x = std::move(xn);
    if (change <= 1e-13 * (1.0 + m.norm(x))) break;
  }
  return x;
}

// (mu/2)||w - c||_P^2 part of psi; indicators are handled as constraints.
double smooth_value(const ScaledMetric& m, const CompositeTerm& psi, const Vec& w) {
  if (!psi.has_quadratic()) return 0.0;
  return 0.5 * psi.mu() * m.sq_norm(sub(w, psi.center()));
}

// Four-point Gauss-Legendre rule on [0, 1]; exact for cubics along the path,
// so exact for quadratic f.
double line_integral(const std::function<Vec(const Vec&)>& grad, const Vec& from, const Vec& to) {
  static const double nodes[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                                  0.9305681557970263};
  static const double weights[4] = {0.1739274225687269, 0.3260725774312731,
                                    0.3260725774312731, 0.1739274225687269};
  const Vec d = sub(to, from);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += weights[k] * dot(grad(lincomb(1.0, from, nodes[k], d)), d);
  return total;
}

double step_for(double lipschitz, double mu, double radius, double grad_dual_norm) {
  const double l = lipschitz + mu;
  if (l > 0.0) return 1.0 / l;
  // Linear objective: one long step lands on the boundary.
  return 1e6 * radius / std::max(grad_dual_norm, 1e-300);
}

// Maximize phi over ball(center, radius) cap dom psi by projected gradient
// ascent; returns the best value of phi(w) - phi(start) seen.
double ascend(const ScaledMetric& m, const CompositeTerm& psi, const Vec& center, double radius,
              const Vec& start, double lipschitz,
              const std::function<Vec(const Vec&)>& grad,
              const std::function<double(const Vec&)>& increase) {
  Vec w = project_feasible(m, psi, center, radius, start);
  double best = increase(w);
  const double mu = psi.has_quadratic() ? psi.mu() : 0.0;
  const double step = step_for(lipschitz, mu, radius, m.dual_norm(grad(w)));
  for (int it = 0; it < kEstimateSteps; ++it) {
    Vec g = grad(w);
    Vec next = project_feasible(m, psi, center, radius,
                                lincomb(1.0, w, step, m.apply_inverse(g)));
    const double moved = m.norm(sub(next, w));
    w = std::move(next);
    if ((it + 1) % 25 == 0 || moved == 0.0) best = std::max(best, increase(w));
    if (moved <= 1e-15 * (1.0 + radius)) break;
  }
  return std::max(best, increase(w));
}

}  // namespace

DomainSpec default_domain(const SaddleInstance& sp) {
  return DomainSpec{sp.z0(), Vec{sp.declared.D_x, sp.declared.D_y}};
}

DomainSpec default_domain(const VipInstance& vip) { return DomainSpec{vip.z0, vip.D}; }

BallQuadratic::BallQuadratic(const Matrix& h, ScaledMetric metric)
    : metric_(std::move(metric)), h_(h) {
  const std::size_t n = metric_.dim();
  if (h.empty()) return;
  if (h.rows() != n || h.cols() != n) throw StructuralError("BallQuadratic: dimension mismatch");
  bool zero = true;
  for (double v : h.data()) zero = zero && v == 0.0;
  if (zero) return;
  linear_ = false;
  const Vec& iw = metric_.inverse_weights();
  Eigen::MatrixXd s(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      s(r, c) = 0.5 * (h(r, c) + h(c, r)) * std::sqrt(iw[r] * iw[c]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw NumericalError("BallQuadratic: eigensolver failed");
  eigenvalues_.resize(n);
  eigenvectors_ = Matrix(n, n);
  const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    double ev = es.eigenvalues()(static_cast<Eigen::Index>(i));
    if (ev < -1e-9 * top) throw StructuralError("BallQuadratic: H is not PSD");
    eigenvalues_[i] = ev <= 1e-13 * top ? 0.0 : ev;
    for (std::size_t r = 0; r < n; ++r)
      eigenvectors_(r, i) = es.eigenvectors()(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(i));
  }
}

double BallQuadratic::minimize(const Vec& c, const Vec& center, double radius,
                               Vec* argmin) const {
  const std::size_t n = metric_.dim();
  if (c.size() != n || center.size() != n) throw StructuralError("BallQuadratic: bad input");
  if (!(radius >= 0.0)) throw ParameterError("BallQuadratic: negative radius");
  if (linear_) {
    const double dn = metric_.dual_norm(c);
    if (argmin) {
      *argmin = center;
      if (dn > 0.0) axpy(-radius / dn, metric_.apply_inverse(c), *argmin);
    }
    return dot(c, center) - radius * dn;
  }
  // u = center + W s with W = P^{-1/2}; gradient at center, then rotate.
  const Vec hc = h_.apply(center);
  const double base = 0.5 * dot(center, hc) + dot(c, center);
  Vec gw = add(hc, c);
  const Vec& iw = metric_.inverse_weights();
  for (std::size_t r = 0; r < n; ++r) gw[r] *= std::sqrt(iw[r]);
  const Vec g = eigenvectors_.apply_transpose(gw);
  const double gnorm = norm2(g);

  const double gscale = std::max(gnorm, 1e-300);
  auto step_norm_sq = [&](double nu) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = eigenvalues_[i] + nu;
      if (d > 0.0) s += (g[i] / d) * (g[i] / d);
      else if (std::abs(g[i]) > 1e-14 * gscale) return kInf;
    }
    return s;
  };

  double nu = 0.0;
  if (step_norm_sq(0.0) > radius * radius) {
    double lo = 0.0, hi = gnorm / std::max(radius, 1e-300);
    while (step_norm_sq(hi) > radius * radius) hi *= 2.0;
    for (int it = 0; it < 300 && hi - lo > 1e-16 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (step_norm_sq(mid) > radius * radius) lo = mid;
      else hi = mid;
    }
    nu = hi;
  }
  // Zero-curvature directions with no gradient component stay at zero
  // (the hard case cannot reduce the value further).
  Vec t(n, 0.0);
  double value = base;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = eigenvalues_[i] + nu;
    if (d > 0.0) t[i] = -g[i] / d;
    value += 0.5 * eigenvalues_[i] * t[i] * t[i] + g[i] * t[i];
  }
  if (argmin) {
    Vec s = eigenvectors_.apply(t);
    for (std::size_t r = 0; r < n; ++r) s[r] *= std::sqrt(iw[r]);
    *argmin = add(center, s);
  }
  return value;
}

SaddleGapEvaluator::SaddleGapEvaluator(const SaddleInstance& sp, DomainSpec domain,
                                       bool allow_exact)
    : sp_(&sp), domain_(std::move(domain)) {
  if (domain_.center.size() != sp.nx() + sp.ny() || domain_.radii.size() != 2)
    throw StructuralError("restricted_gap: domain does not match the instance");
  exact_ = allow_exact && sp.quadratic && sp.psi_x.is_zero() && sp.psi_y.is_zero();
  if (exact_) {
    tr_x_ = std::make_unique<BallQuadratic>(sp.quadratic->hx, sp.metric_x);
    tr_y_ = std::make_unique<BallQuadratic>(sp.quadratic->hy, sp.metric_y);
  }
}

GapResult SaddleGapEvaluator::operator()(const Vec& z) const {
  const std::size_t nx = sp_->nx(), ny = sp_->ny();
  if (z.size() != nx + ny) throw StructuralError("restricted_gap: candidate dimension");
  const Vec x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(nx));
  const Vec y(z.begin() + static_cast<std::ptrdiff_t>(nx), z.end());
  if (!exact_) return estimate(x, y);

  const QuadraticSaddleData& q = *sp_->quadratic;
  const Vec cx(domain_.center.begin(), domain_.center.begin() + static_cast<std::ptrdiff_t>(nx));
  const Vec cy(domain_.center.begin() + static_cast<std::ptrdiff_t>(nx), domain_.center.end());
  // max_y f(xbar, y) = [x-only terms] - min_y 1/2 y'Hy y - (A xbar + gy)'y
  Vec lin_y = add(q.a.apply(x), q.gy);
  for (double& v : lin_y) v = -v;
  const double min_y = tr_y_->minimize(lin_y, cy, domain_.radii[1]);
  const double x_terms = (q.hx.empty() ? 0.0 : 0.5 * dot(x, q.hx.apply(x))) + dot(q.gx, x);
  // min_x f(x, ybar) = [y-only terms] + min_x 1/2 x'Hx x + (gx + A'ybar)'x
  const Vec lin_x = add(q.gx, q.a.apply_transpose(y));
  const double min_x = tr_x_->minimize(lin_x, cx, domain_.radii[0]);
  const double y_terms = (q.hy.empty() ? 0.0 : -0.5 * dot(y, q.hy.apply(y))) + dot(q.gy, y);
  GapResult r;
  r.value = (x_terms - min_y) - (y_terms + min_x);
  r.exact = true;
  r.method = "trust-region";
  return r;
}

double SaddleGapEvaluator::fvalue(const Vec& x, const Vec& y) const {
  if (sp_->value) return sp_->value(x, y);
  return sp_->quadratic->value(x, y);
}

GapResult SaddleGapEvaluator::estimate(const Vec& x, const Vec& y) const {
  const SaddleInstance& sp = *sp_;
  const std::size_t nx = sp.nx();
  const Vec cx(domain_.center.begin(), domain_.center.begin() + static_cast<std::ptrdiff_t>(nx));
  const Vec cy(domain_.center.begin() + static_cast<std::ptrdiff_t>(nx), domain_.center.end());
  const bool have_values = static_cast<bool>(sp.value) || static_cast<bool>(sp.quadratic);

  // Increase of f(xbar, .) - q_y over ybar, and of -(f(., ybar) + q_x) over xbar.
  auto up_y = [&](const Vec& w) {
    double df = have_values
                    ? fvalue(x, w) - fvalue(x, y)
                    : line_integral([&](const Vec& p) { return sp.grad_y(x, p); }, y, w);
    return df - smooth_value(sp.metric_y, sp.psi_y, w) + smooth_value(sp.metric_y, sp.psi_y, y);
  };
  auto up_x = [&](const Vec& w) {
    double df = have_values
                    ? fvalue(x, y) - fvalue(w, y)
                    : -line_integral([&](const Vec& p) { return sp.grad_x(p, y); }, x, w);
    return df - smooth_value(sp.metric_x, sp.psi_x, w) + smooth_value(sp.metric_x, sp.psi_x, x);
  };
  auto grad_y = [&](const Vec& w) {
    return sub(sp.grad_y(x, w), sp.psi_y.smooth_gradient(sp.metric_y, w));
  };
  auto grad_x = [&](const Vec& w) {
    Vec g = add(sp.grad_x(w, y), sp.psi_x.smooth_gradient(sp.metric_x, w));
    for (double& v : g) v = -v;
    return g;
  };
  const double gy = ascend(sp.metric_y, sp.psi_y, cy, domain_.radii[1], y, sp.declared.L_y,
                           grad_y, up_y);
  const double gx = ascend(sp.metric_x, sp.psi_x, cx, domain_.radii[0], x, sp.declared.L_x,
                           grad_x, up_x);
  GapResult r;
  r.value = gx + gy;
  r.exact = false;
  r.method = "projected-gradient";
  return r;
}

VipGapEvaluator::VipGapEvaluator(const VipInstance& vip, DomainSpec domain, bool allow_exact)
    : vip_(&vip), domain_(std::move(domain)) {
  if (domain_.center.size() != vip.dim() || domain_.radii.size() != vip.blocks())
    throw StructuralError("restricted_gap: domain does not match the instance");
  bool zero_psi = true;
  for (const auto& p : vip.psis) zero_psi = zero_psi && p.is_zero();
  exact_ = allow_exact && vip.polymatrix && zero_psi;
  if (!exact_) return;
  const PolymatrixData& pm = *vip.polymatrix;
  for (std::size_t i = 0; i < vip.blocks(); ++i) {
    const std::size_t o = vip.offset(i), d = vip.block_dim(i);
    Matrix aii = pm.m.block(o, o, d, d);
    Matrix h(d, d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) h(r, c) = aii(r, c) + aii(c, r);
    tr_.push_back(std::make_unique<BallQuadratic>(h, vip.metrics[i]));
  }
}

GapResult VipGapEvaluator::operator()(const Vec& z) const {
  const VipInstance& vip = *vip_;
  if (z.size() != vip.dim()) throw StructuralError("restricted_gap: candidate dimension");
  if (!exact_) return estimate(z);
  // <Mz - b, zbar - z> = (M'zbar + b)'z - z'Mz - b'zbar, and z'Mz only sees
  // the diagonal blocks because the off-diagonal part is skew.
  const PolymatrixData& pm = *vip.polymatrix;
  const Vec c = add(pm.m.apply_transpose(z), pm.b);
  double total = -dot(pm.b, z);
  for (std::size_t i = 0; i < vip.blocks(); ++i) {
    Vec ci = vip.slice(c, i);
    for (double& v : ci) v = -v;
    total -= tr_[i]->minimize(ci, vip.slice(domain_.center, i), domain_.radii[i]);
  }
  GapResult r;
  r.value = total;
  r.exact = true;
  r.method = "trust-region";
  return r;
}

GapResult VipGapEvaluator::estimate(const Vec& zbar) const {
  const VipInstance& vip = *vip_;
  const std::size_t n = vip.dim();
  const Vec v0 = vip.evaluate(zbar);
  // Affine model V(z) ~ V(zbar) + J (z - zbar) from central differences.
  Matrix jac(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const double h = 1e-6 * (1.0 + std::abs(zbar[c]));
    Vec zp = zbar, zm = zbar;
    zp[c] += h;
    zm[c] -= h;
    const Vec d = sub(vip.evaluate(zp), vip.evaluate(zm));
    for (std::size_t r = 0; r < n; ++r) jac(r, c) = d[r] / (2.0 * h);
  }
  // Curvature of the model in the block metrics.
  Matrix sym(n, n);
  Vec iw_sqrt(n);
  for (std::size_t i = 0; i < vip.blocks(); ++i) {
    const Vec& iw = vip.metrics[i].inverse_weights();
    for (std::size_t k = 0; k < iw.size(); ++k) iw_sqrt[vip.offset(i) + k] = std::sqrt(iw[k]);
  }
  double mu_max = 0.0;
  for (const auto& p : vip.psis) mu_max = std::max(mu_max, p.has_quadratic() ? p.mu() : 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      sym(r, c) = (jac(r, c) + jac(c, r)) * iw_sqrt[r] * iw_sqrt[c];
  const double curvature = spectral_norm(sym) + mu_max;

  auto project = [&](const Vec& z) {
    Vec out(n);
    for (std::size_t i = 0; i < vip.blocks(); ++i)
      vip.assign(out, i,
                 project_feasible(vip.metrics[i], vip.psis[i], vip.slice(domain_.center, i),
                                  domain_.radii[i], vip.slice(z, i)));
    return out;
  };
  auto psi_smooth = [&](const Vec& z) {
    double s = 0.0;
    for (std::size_t i = 0; i < vip.blocks(); ++i)
      s += smooth_value(vip.metrics[i], vip.psis[i], vip.slice(z, i));
    return s;
  };
  auto true_h = [&](const Vec& z) {
    return dot(vip.evaluate(z), sub(zbar, z)) + psi_smooth(zbar) - psi_smooth(z);
  };
  auto model_grad = [&](const Vec& z) {
    const Vec dz = sub(z, zbar);
    Vec g = add(v0, jac.apply(dz));
    for (double& v : g) v = -v;
    axpy(-1.0, jac.apply_transpose(dz), g);
    for (std::size_t i = 0; i < vip.blocks(); ++i) {
      Vec gi = vip.slice(g, i);
      axpy(-1.0, vip.psis[i].smooth_gradient(vip.metrics[i], vip.slice(z, i)), gi);
      vip.assign(g, i, vip.metrics[i].apply_inverse(gi));
    }
    return g;
  };

  Vec z = project(zbar);
  double best = true_h(z);
  double rmax = 0.0;
  for (double r : domain_.radii) rmax = std::max(rmax, r);
  const Vec g0 = model_grad(z);
  const double step = curvature > 0.0 ? 1.0 / curvature
                                      : 1e6 * rmax / std::max(norm2(g0), 1e-300);
  for (int it = 0; it < kEstimateSteps; ++it) {
    Vec next = project(lincomb(1.0, z, step, model_grad(z)));
    const double moved = norm2(sub(next, z));
    z = std::move(next);
    if ((it + 1) % 25 == 0) best = std::max(best, true_h(z));
    if (moved <= 1e-15 * (1.0 + rmax)) break;
  }
  best = std::max(best, true_h(z));
  GapResult r;
  r.value = best;
  r.exact = false;
  r.method = "affine-model";
  return r;
}

GapResult restricted_gap(const SaddleInstance& sp, const Vec& candidate,
                         const DomainSpec& domain) {
  return SaddleGapEvaluator(sp, domain)(candidate);
}

GapResult restricted_gap(const VipInstance& vip, const Vec& candidate, const DomainSpec& domain) {
  return VipGapEvaluator(vip, domain)(candidate);
}

double theta_factor(double D_x, double D_y, double Dhat_x, double Dhat_y) {
  if (!(D_x > 0.0 && D_y > 0.0 && Dhat_x > 0.0 && Dhat_y > 0.0))
    throw ParameterError("theta_factor: distances must be positive");
  return (D_x * Dhat_y) / (Dhat_x * D_y) + (D_y * Dhat_x) / (Dhat_y * D_x);
}

double ceil_tolerant(double x) {
  return std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)));
}

BoundsReport complexity_bounds(const BoundsInput& in) {
  if (!(in.epsilon > 0.0)) throw ParameterError("complexity_bounds: epsilon must be positive");
  const double eps = in.epsilon;
  const double dhx = in.Dhat_x > 0.0 ? in.Dhat_x : in.D_x;
  const double dhy = in.Dhat_y > 0.0 ? in.Dhat_y : in.D_y;
  BoundsReport r;
  r.theta = theta_factor(in.D_x, in.D_y, dhx, dhy);
  const double cross = in.L_xy * in.D_x * in.D_y / eps;
  const double diag_x = in.L_x * in.D_x * in.D_x / eps;
  const double diag_y = in.L_y * in.D_y * in.D_y / eps;
  r.dmsp_comm = 2.0 + 2.0 * r.theta * cross;
  r.dmsp_oracle = (in.c_x + in.c_y) * 2.0 * cross +
                  102.0 * std::sqrt(cross) * (in.c_x * std::sqrt(diag_x) + in.c_y * std::sqrt(diag_y));
  r.eg_comm = r.theta * cross + diag_x + diag_y;
  r.eg_oracle = (in.c_x + in.c_y) * r.eg_comm;
  const double ell = std::max(1.0, std::log(1.0 / eps));
  const double lmax = std::max({in.L_x, in.L_xy, in.L_y});
  r.cat_eg_comm = (lmax * dhx * dhy / eps + std::sqrt(in.L_x * dhx * dhx / eps) +
                   std::sqrt(in.L_y * dhy * dhy / eps)) * ell * ell;
  r.catcat_comm = in.L_xy * dhx * dhy / eps * ell * ell * ell;
  r.lower_comm = std::max(0.0, 2.0 / 3.0 * cross - 2.0);
  r.lower_oracle = std::max(0.0, (in.c_x + in.c_y) / 9.0 * cross +
                                     in.c_x / 3.0 * std::sqrt(3.0 * diag_x / 32.0) +
                                     in.c_y / 3.0 * std::sqrt(3.0 * diag_y / 32.0) -
                                     (2.0 * in.c_x + 2.0 * in.c_y) / 3.0);
  return r;
}

BoundsReport complexity_bounds(const VipInstance& vip, double epsilon) {
  if (!(epsilon > 0.0)) throw ParameterError("complexity_bounds: epsilon must be positive");
  BoundsReport r;
  const std::size_t k = vip.blocks();
  r.vip_A.assign(k, 0.0);
  r.vip_B.assign(k, 0.0);
  double sum_a = 0.0, sum_b = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) r.vip_A[i] += vip.lbar(i, j) * vip.D[j];
    r.vip_A[i] *= vip.D[i];
    r.vip_B[i] = vip.lipschitz(i, i) * vip.D[i] * vip.D[i];
    sum_a += r.vip_A[i];
    sum_b += r.vip_B[i];
  }
  r.dmvip_comm = 2.0 + 2.0 * sum_a / epsilon;
  r.eg_vip_comm = (sum_a + sum_b) / epsilon;
  if (k == 2) {
    BoundsInput in;
    in.L_x = vip.lipschitz(0, 0);
    in.L_y = vip.lipschitz(1, 1);
    in.L_xy = vip.lbar(0, 1);
    in.D_x = vip.D[0];
    in.D_y = vip.D[1];
    in.c_x = vip.costs.size() > 0 ? vip.costs[0] : 1.0;
    in.c_y = vip.costs.size() > 1 ? vip.costs[1] : 1.0;
    in.epsilon = epsilon;
    BoundsReport sp = complexity_bounds(in);
    sp.vip_A = r.vip_A;
    sp.vip_B = r.vip_B;
    sp.dmvip_comm = r.dmvip_comm;
    sp.eg_vip_comm = r.eg_vip_comm;
    return sp;
  }
  return r;
}

DmSpBounds dm_sp_bounds(const SaddleParams& p, double epsilon, double Dhat_x, double Dhat_y,
                        double c_x, double c_y) {
  if (!(epsilon > 0.0)) throw ParameterError("dm_sp_bounds: epsilon must be positive");
  if (!(p.L_xy > 0.0)) throw ParameterError("dm_sp_bounds: L_xy must be positive");
  DmSpBounds b;
  b.theta = theta_factor(p.D_x, p.D_y, Dhat_x, Dhat_y);
  b.alpha_x = p.L_xy * Dhat_y / Dhat_x;
  b.alpha_y = p.L_xy * Dhat_x / Dhat_y;
  b.lambda = 2.0;
  const double t = (b.alpha_x * b.lambda * p.D_x * p.D_x + b.alpha_y * b.lambda * p.D_y * p.D_y) /
                   (2.0 * epsilon);
  b.T = static_cast<std::size_t>(std::max(1.0, ceil_tolerant(t)));
  b.comm = 2.0 + 2.0 * b.theta * p.L_xy * p.D_x * p.D_y / epsilon;
  const double T = static_cast<double>(b.T);
  b.queries_x = T * (1.0 + 34.0 * std::sqrt(9.0 * p.L_x / (2.0 * b.alpha_x * b.lambda)));
  b.queries_y = T * (1.0 + 34.0 * std::sqrt(9.0 * p.L_y / (2.0 * b.alpha_y * b.lambda)));
  b.weighted = c_x * b.queries_x + c_y * b.queries_y;
  BoundsInput in{p.L_x, p.L_xy, p.L_y, p.D_x, p.D_y, Dhat_x, Dhat_y, c_x, c_y, epsilon};
  b.thm_weighted = complexity_bounds(in).dmsp_oracle;
  return b;
}

double eg_round_bound(const SaddleParams& p, double epsilon, double Dhat_x, double Dhat_y) {
  BoundsInput in{p.L_x, p.L_xy, p.L_y, p.D_x, p.D_y, Dhat_x, Dhat_y, 1.0, 1.0, epsilon};
  return complexity_bounds(in).eg_comm;
}

double dm_vip_round_bound(const VipInstance& vip, double epsilon) {
  return complexity_bounds(vip, epsilon).dmvip_comm;
}

}  // namespace saddle
