#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace saddle {

using Vec = std::vector<double>;

// Dense row-major matrix. Small and deliberately plain: the heavy lifting
// (matvec, dot products) goes through the dispatched kernels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const double* row(std::size_t r) const { return data_.data() + r * cols_; }
  const std::vector<double>& data() const { return data_; }

  Vec apply(const Vec& x) const;            // A x
  Vec apply_transpose(const Vec& y) const;  // A^T y
  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Matrix& operator*=(double s);
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
void axpy(double a, const Vec& x, Vec& y);
Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scaled(double a, const Vec& x);
// a x + b y
Vec lincomb(double a, const Vec& x, double b, const Vec& y);
double max_abs(const Vec& x);
bool all_finite(const Vec& x);
Vec concat(const Vec& a, const Vec& b);

// Largest singular value by power iteration on A^T A.
double spectral_norm(const Matrix& a, int max_iters = 200, double tol = 1e-10);

}  // namespace saddle
