#include "saddle/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "saddle/errors.hpp"
#include "saddle/kernels.hpp"

namespace saddle {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw StructuralError("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_) throw StructuralError("Matrix::apply: dimension mismatch");
  Vec y(rows_, 0.0);
  if (rows_ && cols_) kernels::active().gemv(data_.data(), rows_, cols_, x.data(), y.data());
  return y;
}

Vec Matrix::apply_transpose(const Vec& y) const {
  if (y.size() != rows_)
    throw StructuralError("Matrix::apply_transpose: dimension mismatch");
  Vec x(cols_, 0.0);
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < rows_; ++r)
    if (y[r] != 0.0) k.axpy(y[r], row(r), x.data(), cols_);
  return x;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw StructuralError("Matrix product: dimension mismatch");
  Matrix out(rows_, o.cols_);
  const auto& k = kernels::active();
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols_; ++j) {
      const double a = (*this)(r, j);
      if (a != 0.0) k.axpy(a, o.row(j), out.data_.data() + r * o.cols_, o.cols_);
    }
  return out;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                     std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw StructuralError("Matrix::block: out of range");
  Matrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw StructuralError("Matrix::set_block: out of range");
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw StructuralError("dot: dimension mismatch");
  return kernels::active().dot(x.data(), y.data(), x.size());
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

void axpy(double a, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw StructuralError("axpy: dimension mismatch");
  kernels::active().axpy(a, x.data(), y.data(), x.size());
}

Vec add(const Vec& x, const Vec& y) { return lincomb(1.0, x, 1.0, y); }
Vec sub(const Vec& x, const Vec& y) { return lincomb(1.0, x, -1.0, y); }

Vec scaled(double a, const Vec& x) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
  return out;
}

Vec lincomb(double a, const Vec& x, double b, const Vec& y) {
  if (x.size() != y.size()) throw StructuralError("lincomb: dimension mismatch");
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

double max_abs(const Vec& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double spectral_norm(const Matrix& a, int max_iters, double tol) {
  if (a.empty()) return 0.0;
  // Deterministic start with all coordinates nonzero and mutually distinct.
  Vec v(a.cols());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = 1.0 + 0.5 * std::sin(1.0 + 3.0 * j);
  double nv = norm2(v);
  for (double& e : v) e /= nv;
  double sigma = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = a.apply_transpose(a.apply(v));
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(dot(v, w));
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = w[j] / nw;
    if (std::abs(next - sigma) <= tol * std::max(1.0, next)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return norm2(a.apply(v));
}

}  // namespace saddle
