#include "saddle/problems.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "saddle/errors.hpp"

namespace saddle {
namespace {

Vec zeros(std::size_t n) { return Vec(n, 0.0); }

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  return e;
}

Matrix from_eigen(const Eigen::MatrixXd& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index r = 0; r < e.rows(); ++r)
    for (Eigen::Index c = 0; c < e.cols(); ++c) m(r, c) = e(r, c);
  return m;
}

Matrix random_orthonormal_columns(std::size_t n, std::size_t k, Rng& rng) {
  Eigen::MatrixXd g = to_eigen(random_gaussian(n, k, rng));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, k);
  return from_eigen(q);
}

}  // namespace

double QuadraticSaddleData::value(const Vec& x, const Vec& y) const {
  double v = dot(gx, x) + dot(gy, y) + dot(y, a.apply(x));
  if (!hx.empty()) v += 0.5 * dot(x, hx.apply(x));
  if (!hy.empty()) v -= 0.5 * dot(y, hy.apply(y));
  return v;
}

Vec QuadraticSaddleData::grad_x(const Vec& x, const Vec& y) const {
  Vec g = a.apply_transpose(y);
  axpy(1.0, gx, g);
  if (!hx.empty()) axpy(1.0, hx.apply(x), g);
  return g;
}

Vec QuadraticSaddleData::grad_y(const Vec& x, const Vec& y) const {
  Vec g = a.apply(x);
  axpy(1.0, gy, g);
  if (!hy.empty()) axpy(-1.0, hy.apply(y), g);
  return g;
}

std::optional<Vec> SaddleInstance::known_solution() const {
  if (saddle_x && saddle_y) return concat(*saddle_x, *saddle_y);
  return std::nullopt;
}

void SaddleInstance::validate() const {
  if (!grad_x || !grad_y) throw StructuralError("SaddleInstance: missing oracle");
  if (x0.size() != metric_x.dim() || y0.size() != metric_y.dim())
    throw StructuralError("SaddleInstance: z0 does not match metric dimensions");
  if (!psi_x.in_domain(metric_x, x0) || !psi_y.in_domain(metric_y, y0))
    throw ParameterError("SaddleInstance: z0 outside dom psi");
  if (!(declared.D_x > 0.0) || !(declared.D_y > 0.0))
    throw ParameterError("SaddleInstance: declared D must be positive");
  if (declared.L_x < 0 || declared.L_xy < 0 || declared.L_y < 0)
    throw ParameterError("SaddleInstance: declared L must be nonnegative");
  if (costs.size() != 2) throw StructuralError("SaddleInstance: costs must have 2 entries");
}

std::size_t VipInstance::offset(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < i; ++j) off += metrics[j].dim();
  return off;
}

Vec VipInstance::slice(const Vec& z, std::size_t i) const {
  if (z.size() != dim()) throw StructuralError("VipInstance::slice: dimension mismatch");
  const auto first = z.begin() + static_cast<std::ptrdiff_t>(offset(i));
  return Vec(first, first + static_cast<std::ptrdiff_t>(block_dim(i)));
}

void VipInstance::assign(Vec& z, std::size_t i, const Vec& part) const {
  if (part.size() != block_dim(i)) throw StructuralError("VipInstance::assign: dimension mismatch");
  std::copy(part.begin(), part.end(), z.begin() + static_cast<std::ptrdiff_t>(offset(i)));
}

double VipInstance::lbar(std::size_t i, std::size_t j) const {
  return std::max(lipschitz(i, j), lipschitz(j, i));
}

Vec VipInstance::evaluate(const Vec& z) const {
  Vec out;
  out.reserve(dim());
  for (const auto& op : oracles) {
    Vec part = op(z);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

void VipInstance::validate() const {
  const std::size_t k = blocks();
  if (k == 0) throw StructuralError("VipInstance: K must be >= 1");
  if (psis.size() != k || oracles.size() != k || gradient_blocks.size() != k)
    throw StructuralError("VipInstance: per-block arrays must have K entries");
  if (lipschitz.rows() != k || lipschitz.cols() != k)
    throw StructuralError("VipInstance: Lipschitz matrix must be K x K");
  if (D.size() != k || costs.size() != k)
    throw StructuralError("VipInstance: D and costs must have K entries");
  std::size_t total = 0;
  for (const auto& m : metrics) total += m.dim();
  if (z0.size() != total) throw StructuralError("VipInstance: z0 dimension mismatch");
  for (double v : lipschitz.data())
    if (v < 0.0) throw ParameterError("VipInstance: Lipschitz entries must be >= 0");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(D[i] > 0.0)) throw ParameterError("VipInstance: D entries must be > 0");
    if (costs[i] < 0.0) throw ParameterError("VipInstance: costs must be >= 0");
    if (!psis[i].in_domain(metrics[i], slice(z0, i)))
      throw ParameterError("VipInstance: z0 outside dom psi");
  }
}

VipInstance as_vip(const SaddleInstance& sp) {
  sp.validate();
  VipInstance v;
  v.kind = sp.kind;
  v.metrics = {sp.metric_x, sp.metric_y};
  v.psis = {sp.psi_x, sp.psi_y};
  const std::size_t nx = sp.nx();
  auto split = [nx](const Vec& z) {
    return std::pair<Vec, Vec>(Vec(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(nx)),
                               Vec(z.begin() + static_cast<std::ptrdiff_t>(nx), z.end()));
  };
  auto gx = sp.grad_x;
  auto gy = sp.grad_y;
  v.oracles = {[gx, split](const Vec& z) {
                 auto [x, y] = split(z);
                 return gx(x, y);
               },
               [gy, split](const Vec& z) {
                 auto [x, y] = split(z);
                 return scaled(-1.0, gy(x, y));
               }};
  v.gradient_blocks = {true, true};
  v.z0 = sp.z0();
  v.lipschitz = Matrix{{sp.declared.L_x, sp.declared.L_xy}, {sp.declared.L_xy, sp.declared.L_y}};
  v.D = {sp.declared.D_x, sp.declared.D_y};
  v.costs = sp.costs;
  v.solution = sp.known_solution();
  return v;
}

SaddleInstance make_quadratic_saddle(QuadraticSaddleData data, Vec x0, Vec y0, double D_x,
                                     double D_y, std::string kind) {
  const std::size_t nx = data.a.cols();
  const std::size_t ny = data.a.rows();
  if (data.gx.size() != nx || data.gy.size() != ny || x0.size() != nx || y0.size() != ny)
    throw StructuralError("make_quadratic_saddle: shape mismatch");
  if (!data.hx.empty() && (data.hx.rows() != nx || data.hx.cols() != nx))
    throw StructuralError("make_quadratic_saddle: Hx shape mismatch");
  if (!data.hy.empty() && (data.hy.rows() != ny || data.hy.cols() != ny))
    throw StructuralError("make_quadratic_saddle: Hy shape mismatch");
  auto q = std::make_shared<const QuadraticSaddleData>(std::move(data));
  SaddleInstance s;
  s.kind = std::move(kind);
  s.metric_x = ScaledMetric(nx);
  s.metric_y = ScaledMetric(ny);
  s.grad_x = [q](const Vec& x, const Vec& y) { return q->grad_x(x, y); };
  s.grad_y = [q](const Vec& x, const Vec& y) { return q->grad_y(x, y); };
  s.value = [q](const Vec& x, const Vec& y) { return q->value(x, y); };
  s.x0 = std::move(x0);
  s.y0 = std::move(y0);
  s.declared.L_x = q->hx.empty() ? 0.0 : spectral_norm(q->hx);
  s.declared.L_xy = spectral_norm(q->a);
  s.declared.L_y = q->hy.empty() ? 0.0 : spectral_norm(q->hy);
  s.declared.D_x = D_x;
  s.declared.D_y = D_y;
  s.quadratic = q;
  return s;
}

SaddleInstance make_bilinear_sp(const Matrix& a, const Vec& b, double D_x, double D_y) {
  if (a.empty()) throw StructuralError("make_bilinear_sp: empty matrix");
  if (b.size() != a.rows()) throw StructuralError("make_bilinear_sp: b must have n_y entries");
  QuadraticSaddleData d;
  d.a = a;
  d.gx = zeros(a.cols());
  d.gy = scaled(-1.0, b);
  SaddleInstance s = make_quadratic_saddle(std::move(d), zeros(a.cols()), zeros(a.rows()), D_x,
                                           D_y, "bilinear");
  // Oracles in their natural form: grad_x = A'y, grad_y = Ax - b.
  auto q = s.quadratic;
  s.grad_x = [q](const Vec&, const Vec& y) { return q->a.apply_transpose(y); };
  s.grad_y = [q](const Vec& x, const Vec&) {
    Vec g = q->a.apply(x);
    axpy(1.0, q->gy, g);
    return g;
  };
  s.declared.L_x = 0.0;
  s.declared.L_y = 0.0;
  // (x, 0) with A x = b is a saddle; record the least-norm one when it exists.
  const auto rows = static_cast<Eigen::Index>(a.rows()), cols = static_cast<Eigen::Index>(a.cols());
  Eigen::MatrixXd ea(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) ea(r, c) = a(r, c);
  const Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);
  const Eigen::VectorXd x = ea.completeOrthogonalDecomposition().solve(eb);
  if ((ea * x - eb).norm() <= 1e-9 * (1.0 + eb.norm())) {
    s.saddle_x = Vec(x.data(), x.data() + cols);
    s.saddle_y = zeros(a.rows());
  }
  return s;
}

SaddleInstance make_quadratic_sp(const Matrix& a, const Vec& b, char side, double D,
                                 std::size_t other_dim) {
  if (a.empty()) throw StructuralError("make_quadratic_sp: empty matrix");
  if (b.size() != a.rows()) throw StructuralError("make_quadratic_sp: b must have rows(A) entries");
  if (side != 'x' && side != 'y') throw ParameterError("make_quadratic_sp: side must be x or y");
  if (other_dim == 0) throw StructuralError("make_quadratic_sp: other_dim must be >= 1");
  const std::size_t n = a.cols();
  auto am = std::make_shared<const Matrix>(a);
  auto bv = std::make_shared<const Vec>(b);
  QuadraticSaddleData d;
  Matrix ata = a.transpose() * a;
  Vec atb = a.apply_transpose(b);
  SaddleInstance s;
  if (side == 'x') {
    d.hx = ata;
    d.gx = scaled(-1.0, atb);
    d.a = Matrix(other_dim, n);
    d.gy = zeros(other_dim);
    s = make_quadratic_saddle(std::move(d), zeros(n), zeros(other_dim), D, D, "quadratic-x");
    s.grad_x = [am, bv](const Vec& x, const Vec&) {
      return am->apply_transpose(sub(am->apply(x), *bv));
    };
    s.grad_y = [other_dim](const Vec&, const Vec&) { return zeros(other_dim); };
    s.value = [am, bv](const Vec& x, const Vec&) {
      Vec r = sub(am->apply(x), *bv);
      return 0.5 * dot(r, r);
    };
  } else {
    d.hy = ata;
    d.gy = atb;
    d.a = Matrix(n, other_dim);
    d.gx = zeros(other_dim);
    s = make_quadratic_saddle(std::move(d), zeros(other_dim), zeros(n), D, D, "quadratic-y");
    s.grad_x = [other_dim](const Vec&, const Vec&) { return zeros(other_dim); };
    // F = -1/2 ||Ay - b||^2, so grad_y F = -A'(Ay - b).
    s.grad_y = [am, bv](const Vec&, const Vec& y) {
      return scaled(-1.0, am->apply_transpose(sub(am->apply(y), *bv)));
    };
    s.value = [am, bv](const Vec&, const Vec& y) {
      Vec r = sub(am->apply(y), *bv);
      return -0.5 * dot(r, r);
    };
  }
  s.declared.L_xy = 0.0;
  return s;
}

SaddleInstance make_weakly_coupled_scsc(double mu_x, double mu_y, double c, std::size_t n,
                                        std::optional<Vec> x0, std::optional<Vec> y0) {
  if (!(mu_x > 0.0) || !(mu_y > 0.0)) throw ParameterError("make_weakly_coupled_scsc: mu must be > 0");
  if (!(c >= 0.0)) throw ParameterError("make_weakly_coupled_scsc: c must be >= 0");
  if (n == 0) throw StructuralError("make_weakly_coupled_scsc: n must be >= 1");
  Vec xs = x0.value_or(Vec(n, 1.0));
  Vec ys = y0.value_or(Vec(n, 1.0));
  if (xs.size() != n || ys.size() != n) throw StructuralError("make_weakly_coupled_scsc: z0 size");
  QuadraticSaddleData d;
  d.hx = Matrix::identity(n);
  d.hx *= mu_x;
  d.hy = Matrix::identity(n);
  d.hy *= mu_y;
  d.a = Matrix::identity(n);
  d.a *= c;
  d.gx = zeros(n);
  d.gy = zeros(n);
  const double dx = std::max(norm2(xs), 1e-12);
  const double dy = std::max(norm2(ys), 1e-12);
  SaddleInstance s = make_quadratic_saddle(std::move(d), xs, ys, dx, dy, "scsc");
  s.declared = {mu_x, c, mu_y, dx, dy};
  s.saddle_x = zeros(n);
  s.saddle_y = zeros(n);
  return s;
}

VipInstance make_polymatrix_vip(const std::vector<std::size_t>& dims, const Matrix& m,
                                const Vec& b, std::optional<Vec> D, std::optional<Vec> z0) {
  const std::size_t k = dims.size();
  if (k == 0) throw StructuralError("make_polymatrix_vip: K must be >= 1");
  std::vector<std::size_t> off(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (dims[i] == 0) throw StructuralError("make_polymatrix_vip: block dims must be >= 1");
    off[i + 1] = off[i] + dims[i];
  }
  const std::size_t n = off[k];
  if (m.rows() != n || m.cols() != n) throw StructuralError("make_polymatrix_vip: matrix must be n x n");
  if (b.size() != n) throw StructuralError("make_polymatrix_vip: b must have n entries");

  const double scale = 1.0 + max_abs(Vec(m.data()));
  Matrix lip(k, k);
  std::vector<bool> gradient(k, true);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      Matrix aij = m.block(off[i], off[j], dims[i], dims[j]);
      lip(i, j) = spectral_norm(aij);
      if (i < j) {
        Matrix aji = m.block(off[j], off[i], dims[j], dims[i]);
        Matrix t = aij.transpose();
        for (std::size_t r = 0; r < t.rows(); ++r)
          for (std::size_t c = 0; c < t.cols(); ++c)
            if (std::abs(aji(r, c) + t(r, c)) > 1e-12 * scale)
              throw StructuralError("make_polymatrix_vip: skew condition A_ji = -A_ij' violated for blocks (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    Matrix aii = m.block(off[i], off[i], dims[i], dims[i]);
    Eigen::MatrixXd e = to_eigen(aii);
    if ((e - e.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      gradient[i] = false;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (e + e.transpose()));
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
      throw StructuralError("make_polymatrix_vip: diagonal block " + std::to_string(i) +
                            " is not positive semidefinite");
  }

  auto data = std::make_shared<PolymatrixData>();
  data->dims = dims;
  data->m = m;
  data->b = b;

  VipInstance v;
  v.kind = "polymatrix";
  v.polymatrix = data;
  for (std::size_t i = 0; i < k; ++i) {
    v.metrics.emplace_back(dims[i]);
    v.psis.push_back(CompositeTerm::zero());
    const std::size_t o = off[i], d = dims[i];
    v.oracles.push_back([data, o, d](const Vec& z) {
      Vec out(d);
      for (std::size_t r = 0; r < d; ++r) {
        const double* row = data->m.row(o + r);
        double s = 0.0;
        for (std::size_t c = 0; c < z.size(); ++c) s += row[c] * z[c];
        out[r] = s - data->b[o + r];
      }
      return out;
    });
  }
  v.gradient_blocks = gradient;
  v.z0 = z0.value_or(Vec(n, 0.0));
  v.lipschitz = lip;
  v.costs = Vec(k, 1.0);

  // Least-squares solution of M z = b; recorded only when it is exact.
  Eigen::VectorXd eb = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd em = to_eigen(m);
  Eigen::VectorXd sol = em.completeOrthogonalDecomposition().solve(eb);
  if ((em * sol - eb).norm() <= 1e-9 * (1.0 + eb.norm()))
    v.solution = Vec(sol.data(), sol.data() + n);

  if (D) {
    v.D = *D;
  } else {
    v.D = Vec(k, 1.0);
    if (v.solution)
      for (std::size_t i = 0; i < k; ++i) {
        const double dist = norm2(sub(v.slice(*v.solution, i), v.slice(v.z0, i)));
        if (dist > 0.0) v.D[i] = dist;
      }
  }
  v.validate();
  return v;
}

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = nd(rng);
  return m;
}

Vec random_gaussian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (double& e : v) e = nd(rng);
  return v;
}

Vec random_on_sphere(std::size_t n, double radius, Rng& rng) {
  Vec v = random_gaussian(n, rng);
  const double nv = norm2(v);
  for (double& e : v) e *= radius / nv;
  return v;
}

Matrix random_psd(std::size_t n, const Vec& spectrum, Rng& rng) {
  if (spectrum.size() != n) throw StructuralError("random_psd: spectrum size");
  Matrix q = random_orthonormal_columns(n, n, rng);
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q(r, k) * spectrum[k] * q(c, k);
      out(r, c) = s;
      out(c, r) = s;
    }
  return out;
}

Matrix random_with_norm(std::size_t rows, std::size_t cols, double norm, Rng& rng) {
  const std::size_t k = std::min(rows, cols);
  Matrix u = random_orthonormal_columns(rows, k, rng);
  Matrix v = random_orthonormal_columns(cols, k, rng);
  std::uniform_real_distribution<double> ud(0.1, 0.9);
  Vec s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i == 0 ? norm : norm * ud(rng);
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < k; ++i) acc += u(r, i) * s[i] * v(c, i);
      out(r, c) = acc;
    }
  return out;
}

SaddleInstance random_bilinear(std::size_t nx, std::size_t ny, double L_xy, double D_x,
                               double D_y, Rng& rng) {
  return random_quadratic_saddle(nx, ny, 0.0, L_xy, 0.0, D_x, D_y, rng);
}

SaddleInstance random_quadratic_saddle(std::size_t nx, std::size_t ny, double L_x, double L_xy,
                                       double L_y, double D_x, double D_y, Rng& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  auto spectrum = [&](std::size_t n, double top) {
    Vec s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i == 0 ? top : 0.8 * top * ud(rng);
    return s;
  };
  QuadraticSaddleData d;
  if (L_x > 0.0) d.hx = random_psd(nx, spectrum(nx, L_x), rng);
  if (L_y > 0.0) d.hy = random_psd(ny, spectrum(ny, L_y), rng);
  d.a = random_with_norm(ny, nx, L_xy, rng);
  Vec xs = random_on_sphere(nx, D_x, rng);
  Vec ys = random_on_sphere(ny, D_y, rng);
  // Place the stationary point at (xs, ys).
  d.gx = scaled(-1.0, d.a.apply_transpose(ys));
  if (!d.hx.empty()) axpy(-1.0, d.hx.apply(xs), d.gx);
  d.gy = scaled(-1.0, d.a.apply(xs));
  if (!d.hy.empty()) axpy(1.0, d.hy.apply(ys), d.gy);
  const bool bilinear = d.hx.empty() && d.hy.empty();
  SaddleInstance s = make_quadratic_saddle(std::move(d), zeros(nx), zeros(ny), D_x, D_y,
                                           bilinear ? "random-bilinear" : "random-quadratic");
  s.saddle_x = xs;
  s.saddle_y = ys;
  return s;
}

VipInstance random_polymatrix(const std::vector<std::size_t>& dims, double coupling,
                              double diagonal, const Vec& D, Rng& rng) {
  const std::size_t k = dims.size();
  if (D.size() != k) throw StructuralError("random_polymatrix: D must have K entries");
  std::vector<std::size_t> off(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) off[i + 1] = off[i] + dims[i];
  const std::size_t n = off[k];
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Matrix m(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    if (diagonal > 0.0) {
      Vec s(dims[i]);
      for (std::size_t t = 0; t < s.size(); ++t) s[t] = t == 0 ? diagonal : 0.8 * diagonal * ud(rng);
      m.set_block(off[i], off[i], random_psd(dims[i], s, rng));
    }
    for (std::size_t j = i + 1; j < k; ++j) {
      Matrix aij = random_with_norm(dims[i], dims[j], coupling, rng);
      m.set_block(off[i], off[j], aij);
      Matrix aji = aij.transpose();
      aji *= -1.0;
      m.set_block(off[j], off[i], aji);
    }
  }
  Vec zs(n);
  for (std::size_t i = 0; i < k; ++i) {
    Vec part = random_on_sphere(dims[i], D[i], rng);
    std::copy(part.begin(), part.end(), zs.begin() + static_cast<std::ptrdiff_t>(off[i]));
  }
  Vec b = m.apply(zs);
  VipInstance v = make_polymatrix_vip(dims, m, b, D);
  v.kind = "random-polymatrix";
  v.solution = zs;
  return v;
}

}  // namespace saddle
