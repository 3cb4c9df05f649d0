#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "saddle/composite.hpp"
#include "saddle/geometry.hpp"
#include "saddle/linalg.hpp"

namespace saddle {

// f(x, y) = 1/2 x'Hx x + gx'x + y'A x - 1/2 y'Hy y + gy'y
// Every generator in this library produces this form; the evaluation module
// uses it for exact gaps and the text format for serialization.
struct QuadraticSaddleData {
  Matrix hx;
  Vec gx;
  Matrix a;  // ny x nx
  Matrix hy;
  Vec gy;

  double value(const Vec& x, const Vec& y) const;
  Vec grad_x(const Vec& x, const Vec& y) const;
  Vec grad_y(const Vec& x, const Vec& y) const;
};

struct SaddleParams {
  double L_x = 0.0;
  double L_xy = 0.0;
  double L_y = 0.0;
  double D_x = 1.0;
  double D_y = 1.0;
};

using PartialOracle = std::function<Vec(const Vec& x, const Vec& y)>;

struct SaddleInstance {
  std::string kind = "custom";
  ScaledMetric metric_x{1};
  ScaledMetric metric_y{1};
  PartialOracle grad_x;  // gradient of f in x
  PartialOracle grad_y;  // gradient of f in y (not negated)
  std::function<double(const Vec&, const Vec&)> value;  // optional
  CompositeTerm psi_x;
  CompositeTerm psi_y;
  Vec x0, y0;
  SaddleParams declared;
  Vec costs{1.0, 1.0};
  std::optional<Vec> saddle_x, saddle_y;
  std::shared_ptr<const QuadraticSaddleData> quadratic;

  std::size_t nx() const { return x0.size(); }
  std::size_t ny() const { return y0.size(); }
  Vec z0() const { return concat(x0, y0); }
  std::optional<Vec> known_solution() const;
  void validate() const;
};

// Block operator V_i evaluated at a joint point.
using BlockOracle = std::function<Vec(const Vec& z)>;

struct PolymatrixData {
  std::vector<std::size_t> dims;
  Matrix m;  // joint block matrix
  Vec b;
};

struct VipInstance {
  std::string kind = "custom";
  std::vector<ScaledMetric> metrics;
  std::vector<CompositeTerm> psis;
  std::vector<BlockOracle> oracles;
  std::vector<bool> gradient_blocks;  // V_i(.; z_-i) is a gradient field
  Vec z0;
  Matrix lipschitz;  // L_ij: V_i is L_ij-Lipschitz in z_j
  Vec D;
  Vec costs;
  std::optional<Vec> solution;
  std::shared_ptr<const PolymatrixData> polymatrix;

  std::size_t blocks() const { return metrics.size(); }
  std::size_t dim() const { return z0.size(); }
  std::size_t offset(std::size_t i) const;
  std::size_t block_dim(std::size_t i) const { return metrics[i].dim(); }
  Vec slice(const Vec& z, std::size_t i) const;
  void assign(Vec& z, std::size_t i, const Vec& part) const;
  // Lbar_ij = max(L_ij, L_ji)
  double lbar(std::size_t i, std::size_t j) const;
  Vec evaluate(const Vec& z) const;  // joint V(z), unmetered
  void validate() const;
};

// V = (grad_x f, -grad_y f). Block 0 is x, block 1 is y.
VipInstance as_vip(const SaddleInstance& sp);

// Generators.
SaddleInstance make_bilinear_sp(const Matrix& a, const Vec& b, double D_x, double D_y);
SaddleInstance make_quadratic_sp(const Matrix& a, const Vec& b, char side, double D = 1.0,
                                 std::size_t other_dim = 1);
SaddleInstance make_weakly_coupled_scsc(double mu_x, double mu_y, double c, std::size_t n,
                                        std::optional<Vec> x0 = std::nullopt,
                                        std::optional<Vec> y0 = std::nullopt);
// Instance from explicit quadratic data; declared L from spectral norms.
SaddleInstance make_quadratic_saddle(QuadraticSaddleData data, Vec x0, Vec y0, double D_x,
                                     double D_y, std::string kind = "quadratic-saddle");

VipInstance make_polymatrix_vip(const std::vector<std::size_t>& dims, const Matrix& m,
                                const Vec& b, std::optional<Vec> D = std::nullopt,
                                std::optional<Vec> z0 = std::nullopt);

// Random generators used by tests, acceptance runs and the CLI.
using Rng = std::mt19937_64;

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);
Vec random_gaussian(std::size_t n, Rng& rng);
Vec random_on_sphere(std::size_t n, double radius, Rng& rng);
// Orthogonal Q * diag(spectrum) * Q'
Matrix random_psd(std::size_t n, const Vec& spectrum, Rng& rng);
// U diag(s) V' with top singular value exactly `norm` and the rest spread in
// [0.1, 0.9] * norm.
Matrix random_with_norm(std::size_t rows, std::size_t cols, double norm, Rng& rng);

// Bilinear-plus-linear instance with a saddle at distance exactly (D_x, D_y)
// from z0 = 0.
SaddleInstance random_bilinear(std::size_t nx, std::size_t ny, double L_xy, double D_x,
                               double D_y, Rng& rng);
// Quadratic saddle with ||Hx|| = L_x, ||A|| = L_xy, ||Hy|| = L_y.
SaddleInstance random_quadratic_saddle(std::size_t nx, std::size_t ny, double L_x,
                                       double L_xy, double L_y, double D_x, double D_y,
                                       Rng& rng);
// Skew off-diagonal blocks with norm `coupling`, PSD diagonal blocks with norm
// `diagonal`, solution on spheres of radii D_i.
VipInstance random_polymatrix(const std::vector<std::size_t>& dims, double coupling,
                              double diagonal, const Vec& D, Rng& rng);

}  // namespace saddle
