#include "saddle/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle/errors.hpp"

namespace saddle {
namespace {

void check_dim(const ScaledMetric& m, const Vec& v, const char* what) {
  if (v.size() != m.dim())
    throw StructuralError(std::string(what) + ": dimension mismatch (expected " +
                          std::to_string(m.dim()) + ", got " + std::to_string(v.size()) + ")");
}

}  // namespace

CompositeTerm CompositeTerm::zero() { return CompositeTerm(); }

CompositeTerm CompositeTerm::ball(Vec center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ParameterError("BallIndicator: radius must be positive");
  CompositeTerm t;
  t.kind_ = Kind::kBall;
  t.center_ = std::move(center);
  t.radius_ = radius;
  return t;
}

CompositeTerm CompositeTerm::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size()) throw StructuralError("BoxIndicator: bound sizes differ");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i])) throw ParameterError("BoxIndicator: lower > upper");
  CompositeTerm t;
  t.kind_ = Kind::kBox;
  t.lower_ = std::move(lower);
  t.upper_ = std::move(upper);
  return t;
}

CompositeTerm CompositeTerm::quadratic(double mu, Vec center) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw ParameterError("QuadraticReg: mu must be >= 0");
  CompositeTerm t;
  t.kind_ = Kind::kQuadratic;
  t.mu_ = mu;
  t.center_ = std::move(center);
  return t;
}

CompositeTerm CompositeTerm::sum(const CompositeTerm& quadratic, const CompositeTerm& base) {
  if (quadratic.kind_ != Kind::kQuadratic)
    throw StructuralError("Sum: first term must be QuadraticReg");
  if (base.kind_ == Kind::kQuadratic) {
    return CompositeTerm::zero().with_quadratic(quadratic.mu_, quadratic.center_)
        .with_quadratic(base.mu_, base.center_);
  }
  if (base.kind_ == Kind::kSum) throw StructuralError("Sum: base term cannot be a Sum");
  if (base.kind_ == Kind::kZero) return quadratic;
  CompositeTerm t;
  t.kind_ = Kind::kSum;
  t.mu_ = quadratic.mu_;
  t.center_ = quadratic.center_;
  t.base_ = std::make_shared<const CompositeTerm>(base);
  return t;
}

std::string CompositeTerm::kind_name() const {
  switch (kind_) {
    case Kind::kZero: return "zero";
    case Kind::kBall: return "ball";
    case Kind::kBox: return "box";
    case Kind::kQuadratic: return "quadratic";
    case Kind::kSum: return "sum";
  }
  return "unknown";
}

const CompositeTerm& CompositeTerm::base() const {
  if (kind_ == Kind::kSum) return *base_;
  return *this;
}

double CompositeTerm::value(const ScaledMetric& m, const Vec& w) const {
  check_dim(m, w, "CompositeTerm::value");
  const double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::kZero:
      return 0.0;
    case Kind::kBall:
      return m.norm(sub(w, center_)) <= radius_ * (1.0 + 1e-12) ? 0.0 : inf;
    case Kind::kBox:
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] < lower_[i] - 1e-12 * (1.0 + std::abs(lower_[i])) ||
            w[i] > upper_[i] + 1e-12 * (1.0 + std::abs(upper_[i])))
          return inf;
      return 0.0;
    case Kind::kQuadratic:
      return 0.5 * mu_ * m.sq_norm(sub(w, center_));
    case Kind::kSum:
      return 0.5 * mu_ * m.sq_norm(sub(w, center_)) + base_->value(m, w);
  }
  return inf;
}

bool CompositeTerm::in_domain(const ScaledMetric& m, const Vec& w, double tol) const {
  check_dim(m, w, "CompositeTerm::in_domain");
  switch (kind_) {
    case Kind::kZero:
    case Kind::kQuadratic:
      return all_finite(w);
    case Kind::kBall:
      return m.norm(sub(w, center_)) <= radius_ + tol;
    case Kind::kBox:
      for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] < lower_[i] - tol || w[i] > upper_[i] + tol) return false;
      return true;
    case Kind::kSum:
      return base_->in_domain(m, w, tol);
  }
  return false;
}

Vec CompositeTerm::prox(const ScaledMetric& m, const Vec& v, double step) const {
  check_dim(m, v, "prox_composite");
  if (!(step > 0.0)) throw ParameterError("prox_composite: step must be positive");
  switch (kind_) {
    case Kind::kZero:
      return v;
    case Kind::kBall: {
      if (!all_finite(v)) throw ParameterError("prox_composite: nonfinite point for ball");
      Vec d = sub(v, center_);
      const double r = m.norm(d);
      if (r <= radius_) return v;
      return lincomb(1.0, center_, radius_ / r, d);
    }
    case Kind::kBox: {
      // Diagonal P keeps the projection separable.
      Vec out(v);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::clamp(out[i], lower_[i], upper_[i]);
      return out;
    }
    case Kind::kQuadratic: {
      const double s = step * mu_;
      return lincomb(1.0 / (1.0 + s), v, s / (1.0 + s), center_);
    }
    case Kind::kSum: {
      const double s = step * mu_;
      Vec shifted = lincomb(1.0 / (1.0 + s), v, s / (1.0 + s), center_);
      return base_->prox(m, shifted, step / (1.0 + s));
    }
  }
  return v;
}

Vec CompositeTerm::project_domain(const ScaledMetric& m, const Vec& v) const {
  switch (kind_) {
    case Kind::kZero:
    case Kind::kQuadratic:
      check_dim(m, v, "project_domain");
      return v;
    case Kind::kBall:
    case Kind::kBox:
      return prox(m, v, 1.0);
    case Kind::kSum:
      return base_->project_domain(m, v);
  }
  return v;
}

Vec CompositeTerm::smooth_gradient(const ScaledMetric& m, const Vec& w) const {
  check_dim(m, w, "smooth_gradient");
  if (!has_quadratic() || mu_ == 0.0) return Vec(w.size(), 0.0);
  return scaled(mu_, m.apply(sub(w, center_)));
}

Vec CompositeTerm::subgradient(const ScaledMetric& m, const Vec& w) const {
  // Zero lies in every normal cone, so the smooth part alone is valid.
  return smooth_gradient(m, w);
}

bool CompositeTerm::is_subgradient(const ScaledMetric& m, const Vec& w, const Vec& g,
                                   double tol) const {
  check_dim(m, w, "is_subgradient");
  check_dim(m, g, "is_subgradient");
  if (!in_domain(m, w, 1e-8)) return false;
  const double scale = 1.0 + max_abs(g);
  switch (kind_) {
    case Kind::kZero:
      return max_abs(g) <= tol * scale;
    case Kind::kQuadratic:
      return max_abs(sub(g, smooth_gradient(m, w))) <= tol * scale;
    case Kind::kSum:
      return base_->is_subgradient(m, w, sub(g, smooth_gradient(m, w)), tol);
    case Kind::kBall: {
      Vec d = sub(w, center_);
      const double r = m.norm(d);
      if (r < radius_ * (1.0 - 1e-9)) return max_abs(g) <= tol * scale;
      // Normal cone of the P-ball at a boundary point: nonnegative multiples of P d.
      Vec n = m.apply(d);
      const double t = dot(g, n) / dot(n, n);
      if (t < -tol * scale) return false;
      return max_abs(lincomb(1.0, g, -t, n)) <= tol * scale;
    }
    case Kind::kBox:
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double span = upper_[i] - lower_[i];
        const double at_tol = 1e-9 * (1.0 + span);
        const bool at_lo = w[i] <= lower_[i] + at_tol;
        const bool at_hi = w[i] >= upper_[i] - at_tol;
        if (at_lo && at_hi) continue;
        if (at_hi) {
          if (g[i] < -tol * scale) return false;
        } else if (at_lo) {
          if (g[i] > tol * scale) return false;
        } else if (std::abs(g[i]) > tol * scale) {
          return false;
        }
      }
      return true;
  }
  return false;
}

CompositeTerm CompositeTerm::with_quadratic(double mu, const Vec& center) const {
  if (mu == 0.0) return *this;
  switch (kind_) {
    case Kind::kZero:
      return quadratic(mu, center);
    case Kind::kBall:
    case Kind::kBox:
      return sum(quadratic(mu, center), *this);
    case Kind::kQuadratic:
    case Kind::kSum: {
      // mu1||w-c1||^2 + mu2||w-c2||^2 = (mu1+mu2)||w - c||^2 + const
      const double total = mu_ + mu;
      Vec c = lincomb(mu_ / total, center_, mu / total, center);
      CompositeTerm q = quadratic(total, std::move(c));
      return kind_ == Kind::kSum ? sum(q, *base_) : q;
    }
  }
  return *this;
}

Vec prox_composite(const CompositeTerm& term, const ScaledMetric& metric, const Vec& v,
                   double step) {
  return term.prox(metric, v, step);
}

}  // namespace saddle
