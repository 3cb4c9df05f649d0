#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "saddle/linalg.hpp"
#include "saddle/problems.hpp"

namespace saddle {

// Rescaled tridiagonal worst case: A = (L/2)[B_p 0; 0 0] with B_p the
// (p+1) x p lower bidiagonal difference matrix, p = 2k + 1, and b chosen so
// that A v* = b with ||v*|| = D.
struct KrylovInstance {
  Matrix a;  // m x n
  Vec b;
  double L = 1.0;
  double D = 1.0;
  std::size_t k = 1;
  std::size_t p = 3;
  double gamma = 0.0;
  Vec v_star;
};

KrylovInstance worst_case_instance(double L, double D, std::size_t k, std::size_t m,
                                   std::size_t n);

// Orthonormal basis (Euclidean) of span{g, M g, ..., M^{k-1} g}, built by
// modified Gram-Schmidt with one re-orthogonalization pass. Directions whose
// residual falls below 1e-12 of the largest generator are dropped.
class KrylovBasis {
 public:
  KrylovBasis() = default;
  // H^k(A, b) = span{A'b, (A'A)A'b, ...}: the x-side subspace.
  static KrylovBasis x_side(const Matrix& a, const Vec& b, std::size_t k);
  // span{b, (AA')b, ...}: the y-side subspace.
  static KrylovBasis y_side(const Matrix& a, const Vec& b, std::size_t k);

  std::size_t size() const { return vectors_.size(); }
  const std::vector<Vec>& vectors() const { return vectors_; }
  // Euclidean distance from v to the subspace.
  double residual(const Vec& v) const;

 private:
  static KrylovBasis build(const std::function<Vec(const Vec&)>& op, Vec start, std::size_t k);
  std::vector<Vec> vectors_;
};

// min over v in H^k(A, b) of 1/2 ||A v - b||^2 by least squares on the basis.
double krylov_min_residual(const Matrix& a, const Vec& b, std::size_t k);
double krylov_min_residual(const KrylovInstance& inst, std::size_t k);

// Closed form L^2 gamma^2 / (16 (k+1)) of the construction at its own k.
double worst_case_residual(const KrylovInstance& inst);

// Lower-bound subclass instances, A of shape m x n from the construction:
//   "x":  1/2 ||A x - b||^2, construction at (sqrt(L), D_x), dummy 1-d y
//   "y":  -1/2 ||A y - b||^2, construction at (sqrt(L), D_y), dummy 1-d x
//   "xy": <A x - b, y>, construction at (L, D_x), y in R^m
// Declared constants are the class parameters (L, D_x, D_y).
SaddleInstance make_subclass_instance(const std::string& kind, double L, double D_x,
                                      double D_y, std::size_t k, std::size_t m, std::size_t n);

// Smallest k with the gap of the 'xy' construction forced above eps for
// candidates confined to H^{k'} with k' < k: floor(L D_x D_y / (3 eps)).
std::size_t hard_instance_k(double L, double D_x, double D_y, double eps);

}  // namespace saddle
