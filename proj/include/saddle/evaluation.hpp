#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>

#include "saddle/problems.hpp"

namespace saddle {

struct GapResult {
  double value = 0.0;
  bool exact = false;
  std::string method;
};

// Ball centers and radii per block (balls intersected with dom psi).
struct DomainSpec {
  Vec center;
  Vec radii;
};

DomainSpec default_domain(const SaddleInstance& sp);
DomainSpec default_domain(const VipInstance& vip);

// min 1/2 u'Hu + c'u over ||u - center||_P <= radius, solved exactly through
// an eigendecomposition of P^{-1/2} H P^{-1/2} and a secular-equation root.
class BallQuadratic {
 public:
  // H may be empty (linear objective). H must be symmetric PSD.
  BallQuadratic(const Matrix& h, ScaledMetric metric);
  double minimize(const Vec& c, const Vec& center, double radius, Vec* argmin = nullptr) const;

 private:
  ScaledMetric metric_;
  Matrix h_;
  bool linear_ = true;
  Vec eigenvalues_;
  Matrix eigenvectors_;  // columns
};

// Restricted duality gap of a saddle instance at candidate z = (x, y).
// Exact for quadratic instances with psi = Zero; projected-gradient estimate
// otherwise. The evaluator caches the eigendecompositions, so build it once
// per run.
class SaddleGapEvaluator {
 public:
  SaddleGapEvaluator(const SaddleInstance& sp, DomainSpec domain, bool allow_exact = true);
  GapResult operator()(const Vec& z) const;
  bool exact() const { return exact_; }

 private:
  GapResult estimate(const Vec& x, const Vec& y) const;
  double fvalue(const Vec& x, const Vec& y) const;

  const SaddleInstance* sp_;
  DomainSpec domain_;
  bool exact_ = false;
  std::unique_ptr<BallQuadratic> tr_x_, tr_y_;
};

// Weak gap sup_{z in B cap Q} <V(z), zbar - z> + psi(zbar) - psi(z).
// Exact for polymatrix instances with psi = Zero; estimate otherwise.
class VipGapEvaluator {
 public:
  VipGapEvaluator(const VipInstance& vip, DomainSpec domain, bool allow_exact = true);
  GapResult operator()(const Vec& z) const;
  bool exact() const { return exact_; }

 private:
  GapResult estimate(const Vec& z) const;

  const VipInstance* vip_;
  DomainSpec domain_;
  bool exact_ = false;
  std::vector<std::unique_ptr<BallQuadratic>> tr_;
};

using GapOracle = std::function<GapResult(const Vec&)>;

GapResult restricted_gap(const SaddleInstance& sp, const Vec& candidate, const DomainSpec& domain);
GapResult restricted_gap(const VipInstance& vip, const Vec& candidate, const DomainSpec& domain);

// Remark on disproportionate distance estimates; >= 2 with equality iff the
// estimates are proportional.
double theta_factor(double D_x, double D_y, double Dhat_x, double Dhat_y);

// ceil that ignores floating noise of relative size 1e-9 just above an integer.
double ceil_tolerant(double x);

struct BoundsInput {
  double L_x = 0.0, L_xy = 0.0, L_y = 0.0;
  double D_x = 1.0, D_y = 1.0;
  double Dhat_x = 0.0, Dhat_y = 0.0;  // 0 means "equal to D"
  double c_x = 1.0, c_y = 1.0;
  double epsilon = 0.1;
};

struct BoundsReport {
  double theta = 2.0;
  double dmsp_comm = 0.0;    // 2 + 2 theta L_xy Dx Dy / eps
  double dmsp_oracle = 0.0;  // weighted oracle bound of the DM-SP theorem
  double eg_comm = 0.0;
  double eg_oracle = 0.0;
  double cat_eg_comm = 0.0;  // order-only
  double catcat_comm = 0.0;  // order-only
  double lower_comm = 0.0;
  double lower_oracle = 0.0;
  bool cat_order_only = true;
  // VIP extras (empty for SP input).
  double dmvip_comm = 0.0;
  double eg_vip_comm = 0.0;  // order-only sum (A_i + B_i)/eps
  Vec vip_A, vip_B;
};

BoundsReport complexity_bounds(const BoundsInput& in);
BoundsReport complexity_bounds(const VipInstance& vip, double epsilon);

// Per-run DM-SP constants and bounds with the method's own alpha choice.
struct DmSpBounds {
  double alpha_x = 0.0, alpha_y = 0.0, lambda = 2.0;
  double theta = 2.0;
  std::size_t T = 0;             // outer iterations sufficient for eps
  double comm = 0.0;             // 2 + 2 theta L_xy Dx Dy / eps
  double queries_x = 0.0;        // T (1 + 34 sqrt(9 L_x / (2 alpha_x lambda)))
  double queries_y = 0.0;
  double weighted = 0.0;         // c_x queries_x + c_y queries_y
  double thm_weighted = 0.0;     // closed-form weighted bound of the theorem
};

DmSpBounds dm_sp_bounds(const SaddleParams& p, double epsilon, double Dhat_x, double Dhat_y,
                        double c_x = 1.0, double c_y = 1.0);

// Per-run EG bound with the baseline's alpha choice.
double eg_round_bound(const SaddleParams& p, double epsilon, double Dhat_x, double Dhat_y);

// DM-VIP communication bound 2 + sum_{i != j} 2 Lbar_ij D_i D_j / eps.
double dm_vip_round_bound(const VipInstance& vip, double epsilon);

}  // namespace saddle
