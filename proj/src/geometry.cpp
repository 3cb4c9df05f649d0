#include "saddle/geometry.hpp"

#include <cmath>
#include <string>

#include "saddle/errors.hpp"
#include "saddle/kernels.hpp"

namespace saddle {

ScaledMetric::ScaledMetric(std::size_t dim)
    : weights_(dim, 1.0), inv_weights_(dim, 1.0) {
  if (dim == 0) throw StructuralError("ScaledMetric: dim must be >= 1");
}

ScaledMetric::ScaledMetric(Vec weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw StructuralError("ScaledMetric: dim must be >= 1");
  inv_weights_.resize(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
      throw ParameterError("ScaledMetric: weights must be positive and finite");
    inv_weights_[i] = 1.0 / weights_[i];
  }
}

bool ScaledMetric::is_identity() const {
  for (double w : weights_)
    if (w != 1.0) return false;
  return true;
}

double ScaledMetric::inner(const Vec& x, const Vec& y) const {
  if (x.size() != dim() || y.size() != dim())
    throw StructuralError("ScaledMetric: dimension mismatch");
  return kernels::active().wdot(weights_.data(), x.data(), y.data(), dim());
}

double ScaledMetric::sq_norm(const Vec& x) const { return inner(x, x); }
double ScaledMetric::norm(const Vec& x) const { return std::sqrt(sq_norm(x)); }

double ScaledMetric::sq_dual_norm(const Vec& g) const {
  if (g.size() != dim()) throw StructuralError("ScaledMetric: dimension mismatch");
  return kernels::active().wdot(inv_weights_.data(), g.data(), g.data(), dim());
}

double ScaledMetric::dual_norm(const Vec& g) const { return std::sqrt(sq_dual_norm(g)); }

Vec ScaledMetric::apply(const Vec& x) const {
  if (x.size() != dim()) throw StructuralError("ScaledMetric: dimension mismatch");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = weights_[i] * x[i];
  return out;
}

Vec ScaledMetric::apply_inverse(const Vec& g) const {
  if (g.size() != dim()) throw StructuralError("ScaledMetric: dimension mismatch");
  Vec out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = inv_weights_[i] * g[i];
  return out;
}

AssembledMetric::AssembledMetric(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw StructuralError("AssembledMetric: no blocks");
  for (const auto& b : blocks_) {
    if (!(b.alpha > 0.0) || !std::isfinite(b.alpha))
      throw ParameterError("AssembledMetric: alpha must be positive, got " +
                           std::to_string(b.alpha));
    offsets_.push_back(dim_);
    dim_ += b.metric.dim();
  }
}

AssembledMetric::AssembledMetric(const std::vector<ScaledMetric>& metrics, const Vec& alphas) {
  if (metrics.size() != alphas.size())
    throw StructuralError("AssembledMetric: metrics/alphas size mismatch");
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < metrics.size(); ++i) blocks.push_back({metrics[i], alphas[i]});
  *this = AssembledMetric(std::move(blocks));
}

void AssembledMetric::check(const Vec& z) const {
  if (z.size() != dim_)
    throw StructuralError("AssembledMetric: expected dimension " + std::to_string(dim_) +
                          ", got " + std::to_string(z.size()));
}

Vec AssembledMetric::slice(const Vec& z, std::size_t i) const {
  check(z);
  const auto first = z.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  return Vec(first, first + static_cast<std::ptrdiff_t>(blocks_[i].metric.dim()));
}

void AssembledMetric::assign(Vec& z, std::size_t i, const Vec& part) const {
  check(z);
  if (part.size() != blocks_[i].metric.dim())
    throw StructuralError("AssembledMetric::assign: block dimension mismatch");
  std::copy(part.begin(), part.end(), z.begin() + static_cast<std::ptrdiff_t>(offsets_[i]));
}

double AssembledMetric::sq_norm(const Vec& z) const {
  check(z);
  double s = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& m = blocks_[i].metric;
    s += blocks_[i].alpha *
         kernels::active().wdot(m.weights().data(), z.data() + offsets_[i],
                                z.data() + offsets_[i], m.dim());
  }
  return s;
}

double AssembledMetric::norm(const Vec& z) const { return std::sqrt(sq_norm(z)); }

double AssembledMetric::sq_dual_norm(const Vec& g) const {
  check(g);
  double s = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& m = blocks_[i].metric;
    s += kernels::active().wdot(m.inverse_weights().data(), g.data() + offsets_[i],
                                g.data() + offsets_[i], m.dim()) /
         blocks_[i].alpha;
  }
  return s;
}

double AssembledMetric::dual_norm(const Vec& g) const { return std::sqrt(sq_dual_norm(g)); }

Vec AssembledMetric::apply(const Vec& z) const {
  check(z);
  Vec out(z.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& w = blocks_[i].metric.weights();
    for (std::size_t j = 0; j < w.size(); ++j)
      out[offsets_[i] + j] = blocks_[i].alpha * w[j] * z[offsets_[i] + j];
  }
  return out;
}

Vec AssembledMetric::apply_inverse(const Vec& g) const {
  check(g);
  Vec out(g.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto& w = blocks_[i].metric.inverse_weights();
    for (std::size_t j = 0; j < w.size(); ++j)
      out[offsets_[i] + j] = w[j] * g[offsets_[i] + j] / blocks_[i].alpha;
  }
  return out;
}

double assembled_norm(const AssembledMetric& m, const Vec& z) { return m.norm(z); }
double assembled_dual_norm(const AssembledMetric& m, const Vec& g) { return m.dual_norm(g); }

}  // namespace saddle
