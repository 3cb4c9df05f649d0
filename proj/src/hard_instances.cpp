#include "saddle/hard_instances.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "saddle/errors.hpp"

namespace saddle {

KrylovInstance worst_case_instance(double L, double D, std::size_t k, std::size_t m,
                                   std::size_t n) {
  if (!(L > 0.0 && D > 0.0)) throw ParameterError("worst_case_instance: L and D must be positive");
  if (k < 1 || m < 1 || 2 * k + 1 > std::min(m - 1, n))
    throw StructuralError("worst_case_instance: need 1 <= k <= (min(m-1, n) - 1)/2");
  KrylovInstance inst;
  inst.L = L;
  inst.D = D;
  inst.k = k;
  const std::size_t p = 2 * k + 1;
  inst.p = p;
  const double pd = static_cast<double>(p);
  inst.gamma = D * std::sqrt(6.0 * (pd + 1.0) / (pd * (2.0 * pd + 1.0)));
  inst.a = Matrix(m, n);
  for (std::size_t j = 0; j < p; ++j) {
    inst.a(j, j) = L / 2.0;
    inst.a(j + 1, j) = -L / 2.0;
  }
  inst.b.assign(m, 0.0);
  const double scale = inst.gamma * L / 2.0;
  inst.b[0] = scale * pd / (pd + 1.0);
  for (std::size_t i = 1; i <= p; ++i) inst.b[i] = -scale / (pd + 1.0);
  inst.v_star.assign(n, 0.0);
  for (std::size_t i = 1; i <= p; ++i)
    inst.v_star[i - 1] = inst.gamma * (pd + 1.0 - static_cast<double>(i)) / (pd + 1.0);
  return inst;
}

KrylovBasis KrylovBasis::build(const std::function<Vec(const Vec&)>& op, Vec start,
                               std::size_t k) {
  KrylovBasis basis;
  Vec g = std::move(start);
  double largest = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double gn = norm2(g);
    largest = std::max(largest, gn);
    if (largest == 0.0) break;
    Vec q = g;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& e : basis.vectors_) axpy(-dot(e, q), e, q);
    const double qn = norm2(q);
    if (qn > 1e-12 * largest) basis.vectors_.push_back(scaled(1.0 / qn, q));
    g = op(g);
  }
  return basis;
}

KrylovBasis KrylovBasis::x_side(const Matrix& a, const Vec& b, std::size_t k) {
  return build([&](const Vec& v) { return a.apply_transpose(a.apply(v)); },
               a.apply_transpose(b), k);
}

KrylovBasis KrylovBasis::y_side(const Matrix& a, const Vec& b, std::size_t k) {
  return build([&](const Vec& v) { return a.apply(a.apply_transpose(v)); }, b, k);
}

double KrylovBasis::residual(const Vec& v) const {
  Vec r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const Vec& e : vectors_) axpy(-dot(e, r), e, r);
  return norm2(r);
}

double krylov_min_residual(const Matrix& a, const Vec& b, std::size_t k) {
  const KrylovBasis basis = KrylovBasis::x_side(a, b, k);
  const std::size_t r = basis.size();
  const auto m = static_cast<Eigen::Index>(a.rows());
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) rhs(i) = b[static_cast<std::size_t>(i)];
  if (r == 0) return 0.5 * rhs.squaredNorm();
  Eigen::MatrixXd aq(m, static_cast<Eigen::Index>(r));
  for (std::size_t c = 0; c < r; ++c) {
    const Vec col = a.apply(basis.vectors()[c]);
    for (Eigen::Index i = 0; i < m; ++i) aq(i, static_cast<Eigen::Index>(c)) = col[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = aq.colPivHouseholderQr().solve(rhs);
  return 0.5 * (aq * coef - rhs).squaredNorm();
}

double krylov_min_residual(const KrylovInstance& inst, std::size_t k) {
  return krylov_min_residual(inst.a, inst.b, k);
}

double worst_case_residual(const KrylovInstance& inst) {
  return inst.L * inst.L * inst.gamma * inst.gamma / (16.0 * (static_cast<double>(inst.k) + 1.0));
}

SaddleInstance make_subclass_instance(const std::string& kind, double L, double D_x,
                                      double D_y, std::size_t k, std::size_t m, std::size_t n) {
  if (kind == "x") {
    const KrylovInstance w = worst_case_instance(std::sqrt(L), D_x, k, m, n);
    SaddleInstance s = make_quadratic_sp(w.a, w.b, 'x', D_x, 1);
    s.kind = "hard-x";
    s.declared.L_x = L;
    s.declared.D_y = D_y;
    s.saddle_x = w.v_star;
    s.saddle_y = Vec(1, 0.0);
    return s;
  }
  if (kind == "y") {
    const KrylovInstance w = worst_case_instance(std::sqrt(L), D_y, k, m, n);
    SaddleInstance s = make_quadratic_sp(w.a, w.b, 'y', D_y, 1);
    s.kind = "hard-y";
    s.declared.L_y = L;
    s.declared.D_x = D_x;
    s.saddle_x = Vec(1, 0.0);
    s.saddle_y = w.v_star;
    return s;
  }
  if (kind == "xy") {
    const KrylovInstance w = worst_case_instance(L, D_x, k, m, n);
    SaddleInstance s = make_bilinear_sp(w.a, w.b, D_x, D_y);
    s.kind = "hard-xy";
    s.declared.L_xy = L;
    s.saddle_x = w.v_star;
    s.saddle_y = Vec(m, 0.0);
    return s;
  }
  throw ParameterError("make_subclass_instance: kind must be x, y or xy");
}

std::size_t hard_instance_k(double L, double D_x, double D_y, double eps) {
  if (!(eps > 0.0)) throw ParameterError("hard_instance_k: eps must be positive");
  return static_cast<std::size_t>(std::floor(L * D_x * D_y / (3.0 * eps) + 1e-9));
}

}  // namespace saddle
