#pragma once

#include <cstddef>
#include <vector>

#include "saddle/linalg.hpp"

namespace saddle {

// Diagonal positive-definite P on one agent's space.
class ScaledMetric {
 public:
  explicit ScaledMetric(std::size_t dim = 1);  // identity
  explicit ScaledMetric(Vec weights);

  std::size_t dim() const { return weights_.size(); }
  const Vec& weights() const { return weights_; }
  const Vec& inverse_weights() const { return inv_weights_; }
  bool is_identity() const;

  double inner(const Vec& x, const Vec& y) const;  // <P x, y>
  double sq_norm(const Vec& x) const;
  double norm(const Vec& x) const;
  double sq_dual_norm(const Vec& g) const;          // <g, P^{-1} g>
  double dual_norm(const Vec& g) const;
  Vec apply(const Vec& x) const;                    // P x
  Vec apply_inverse(const Vec& g) const;            // P^{-1} g

 private:
  Vec weights_;
  Vec inv_weights_;
};

// P = (+)_i alpha_i P_i on the joint space.
class AssembledMetric {
 public:
  struct Block {
    ScaledMetric metric;
    double alpha;
  };

  AssembledMetric() = default;
  explicit AssembledMetric(std::vector<Block> blocks);
  AssembledMetric(const std::vector<ScaledMetric>& metrics, const Vec& alphas);

  std::size_t blocks() const { return blocks_.size(); }
  std::size_t dim() const { return dim_; }
  const Block& block(std::size_t i) const { return blocks_[i]; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  double alpha(std::size_t i) const { return blocks_[i].alpha; }

  double norm(const Vec& z) const;
  double sq_norm(const Vec& z) const;
  double dual_norm(const Vec& g) const;
  double sq_dual_norm(const Vec& g) const;
  Vec apply(const Vec& z) const;
  Vec apply_inverse(const Vec& g) const;

  Vec slice(const Vec& z, std::size_t i) const;
  void assign(Vec& z, std::size_t i, const Vec& part) const;

 private:
  void check(const Vec& z) const;
  std::vector<Block> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_ = 0;
};

double assembled_norm(const AssembledMetric& m, const Vec& z);
double assembled_dual_norm(const AssembledMetric& m, const Vec& g);

}  // namespace saddle
