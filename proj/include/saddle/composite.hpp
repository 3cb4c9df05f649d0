#pragma once

#include <memory>
#include <string>

#include "saddle/geometry.hpp"
#include "saddle/linalg.hpp"

namespace saddle {

// Simple local term psi with an exact, closed-form prox in a diagonal metric.
// Ball radii and quadratic regularizers are measured in the metric passed to
// each call, so the same term behaves consistently under preconditioning.
class CompositeTerm {
 public:
  enum class Kind { kZero, kBall, kBox, kQuadratic, kSum };

  static CompositeTerm zero();
  static CompositeTerm ball(Vec center, double radius);
  static CompositeTerm box(Vec lower, Vec upper);
  // (mu/2) ||w - center||_P^2
  static CompositeTerm quadratic(double mu, Vec center);
  // quadratic part plus a Zero/Ball/Box base term
  static CompositeTerm sum(const CompositeTerm& quadratic, const CompositeTerm& base);

  Kind kind() const { return kind_; }
  std::string kind_name() const;
  bool is_zero() const { return kind_ == Kind::kZero; }
  bool is_indicator() const { return kind_ == Kind::kBall || kind_ == Kind::kBox; }
  bool has_quadratic() const { return kind_ == Kind::kQuadratic || kind_ == Kind::kSum; }

  double mu() const { return mu_; }
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  // Ball/Box/Zero part of a Sum, or the term itself otherwise.
  const CompositeTerm& base() const;

  // +infinity outside the domain.
  double value(const ScaledMetric& m, const Vec& w) const;
  bool in_domain(const ScaledMetric& m, const Vec& w, double tol = 1e-10) const;

  // argmin_w (1/(2 step)) ||w - v||_P^2 + psi(w)
  Vec prox(const ScaledMetric& m, const Vec& v, double step) const;
  // P-metric projection onto dom psi (identity for Zero/Quadratic).
  Vec project_domain(const ScaledMetric& m, const Vec& v) const;

  // Gradient of the smooth (quadratic) part; zero vector if none.
  Vec smooth_gradient(const ScaledMetric& m, const Vec& w) const;
  // One valid element of the subdifferential at w in dom psi.
  Vec subgradient(const ScaledMetric& m, const Vec& w) const;
  // Membership test g in d psi(w) for the built-in kinds.
  bool is_subgradient(const ScaledMetric& m, const Vec& w, const Vec& g,
                      double tol = 1e-8) const;

  // psi + (mu/2)||. - center||_P^2, merging quadratics.
  CompositeTerm with_quadratic(double mu, const Vec& center) const;

 private:
  Kind kind_ = Kind::kZero;
  double mu_ = 0.0;
  Vec center_;
  double radius_ = 0.0;
  Vec lower_, upper_;
  std::shared_ptr<const CompositeTerm> base_;
};

Vec prox_composite(const CompositeTerm& term, const ScaledMetric& metric, const Vec& v,
                   double step);

}  // namespace saddle
