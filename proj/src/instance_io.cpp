#include "saddle/instance_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "saddle/errors.hpp"

namespace saddle {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put(std::ostream& os, const std::string& key, const Vec& v) {
  os << key << " =";
  for (double x : v) os << ' ' << fmt(x);
  os << '\n';
}

void put(std::ostream& os, const std::string& key, const Matrix& m) {
  put(os, key, m.data());
}

std::string psi_text(const CompositeTerm& psi) {
  if (psi.kind() == CompositeTerm::Kind::kZero) return "zero";
  if (psi.kind() == CompositeTerm::Kind::kBall) {
    std::string s = "ball " + fmt(psi.radius());
    for (double c : psi.center()) s += " " + fmt(c);
    return s;
  }
  throw StructuralError("write_instance: only zero and ball terms are serializable");
}

using Table = std::map<std::string, std::string>;

Table parse(std::istream& is) {
  Table t;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw ConfigError("instance file line " + std::to_string(lineno) + ": expected key = value");
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    t[key] = line.substr(eq + 1);
  }
  return t;
}

const std::string& need(const Table& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("instance file: missing key '" + key + "'");
  return it->second;
}

Vec numbers(const std::string& text, const std::string& key) {
  std::istringstream ss(text);
  Vec out;
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("instance file: '" + key + "' has a non-numeric entry '" + tok + "'");
    }
  }
  return out;
}

Vec vec_of(const Table& t, const std::string& key, std::size_t n) {
  Vec v = numbers(need(t, key), key);
  if (v.size() != n)
    throw ConfigError("instance file: '" + key + "' needs " + std::to_string(n) + " entries");
  return v;
}

Matrix mat_of(const Table& t, const std::string& key, std::size_t rows, std::size_t cols) {
  const Vec v = vec_of(t, key, rows * cols);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = v[r * cols + c];
  return m;
}

std::size_t count_of(const Table& t, const std::string& key) {
  const Vec v = numbers(need(t, key), key);
  if (v.size() != 1 || v[0] < 1 || v[0] != static_cast<double>(static_cast<std::size_t>(v[0])))
    throw ConfigError("instance file: '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v[0]);
}

CompositeTerm psi_of(const Table& t, const std::string& key, std::size_t n) {
  auto it = t.find(key);
  if (it == t.end()) return CompositeTerm::zero();
  std::istringstream ss(it->second);
  std::string kind;
  ss >> kind;
  if (kind == "zero") return CompositeTerm::zero();
  if (kind == "ball") {
    std::string rest;
    std::getline(ss, rest);
    const Vec v = numbers(rest, key);
    if (v.size() != n + 1) throw ConfigError("instance file: '" + key + "' ball needs r and center");
    return CompositeTerm::ball(Vec(v.begin() + 1, v.end()), v[0]);
  }
  throw ConfigError("instance file: unknown term '" + kind + "' for '" + key + "'");
}

std::optional<ScaledMetric> metric_of(const Table& t, const std::string& key, std::size_t n) {
  if (!t.count(key)) return std::nullopt;
  return ScaledMetric(vec_of(t, key, n));
}

}  // namespace

void write_instance(std::ostream& os, const SaddleInstance& sp) {
  if (!sp.quadratic) throw StructuralError("write_instance: saddle instance has no quadratic data");
  const QuadraticSaddleData& q = *sp.quadratic;
  const std::size_t nx = sp.nx(), ny = sp.ny();
  os << "type = saddle\n";
  os << "kind = " << sp.kind << '\n';
  os << "nx = " << nx << "\nny = " << ny << '\n';
  put(os, "hx", q.hx.empty() ? Matrix(nx, nx) : q.hx);
  put(os, "gx", q.gx);
  put(os, "a", q.a);
  put(os, "hy", q.hy.empty() ? Matrix(ny, ny) : q.hy);
  put(os, "gy", q.gy);
  put(os, "L", Vec{sp.declared.L_x, sp.declared.L_xy, sp.declared.L_y});
  put(os, "D", Vec{sp.declared.D_x, sp.declared.D_y});
  put(os, "z0", sp.z0());
  if (!sp.metric_x.is_identity()) put(os, "metric_x", sp.metric_x.weights());
  if (!sp.metric_y.is_identity()) put(os, "metric_y", sp.metric_y.weights());
  os << "psi_x = " << psi_text(sp.psi_x) << '\n';
  os << "psi_y = " << psi_text(sp.psi_y) << '\n';
  if (auto sol = sp.known_solution()) put(os, "solution", *sol);
}

void write_instance(std::ostream& os, const VipInstance& vip) {
  if (!vip.polymatrix) throw StructuralError("write_instance: VIP instance has no polymatrix data");
  const PolymatrixData& pm = *vip.polymatrix;
  os << "type = vip\n";
  os << "kind = " << vip.kind << '\n';
  os << "dims =";
  for (std::size_t d : pm.dims) os << ' ' << d;
  os << '\n';
  put(os, "m", pm.m);
  put(os, "b", pm.b);
  put(os, "L", vip.lipschitz);
  put(os, "D", vip.D);
  put(os, "z0", vip.z0);
  for (std::size_t i = 0; i < vip.blocks(); ++i) {
    if (!vip.metrics[i].is_identity()) put(os, "metric_" + std::to_string(i + 1), vip.metrics[i].weights());
    os << "psi_" << i + 1 << " = " << psi_text(vip.psis[i]) << '\n';
  }
  if (vip.solution) put(os, "solution", *vip.solution);
}

LoadedInstance read_instance(std::istream& is) {
  const Table t = parse(is);
  const std::string type = [&] {
    std::istringstream ss(need(t, "type"));
    std::string s;
    ss >> s;
    return s;
  }();
  std::string kind = need(t, "kind");
  kind.erase(0, kind.find_first_not_of(" \t"));
  kind.erase(kind.find_last_not_of(" \t\r") + 1);
  LoadedInstance out;
  if (type == "saddle") {
    const std::size_t nx = count_of(t, "nx"), ny = count_of(t, "ny");
    QuadraticSaddleData d;
    d.hx = mat_of(t, "hx", nx, nx);
    d.gx = vec_of(t, "gx", nx);
    d.a = mat_of(t, "a", ny, nx);
    d.hy = mat_of(t, "hy", ny, ny);
    d.gy = vec_of(t, "gy", ny);
    const Vec L = vec_of(t, "L", 3);
    const Vec D = vec_of(t, "D", 2);
    const Vec z0 = vec_of(t, "z0", nx + ny);
    SaddleInstance s = make_quadratic_saddle(std::move(d), Vec(z0.begin(), z0.begin() + static_cast<std::ptrdiff_t>(nx)),
                                             Vec(z0.begin() + static_cast<std::ptrdiff_t>(nx), z0.end()), D[0], D[1], kind);
    s.declared.L_x = L[0];
    s.declared.L_xy = L[1];
    s.declared.L_y = L[2];
    if (auto m = metric_of(t, "metric_x", nx)) s.metric_x = *m;
    if (auto m = metric_of(t, "metric_y", ny)) s.metric_y = *m;
    s.psi_x = psi_of(t, "psi_x", nx);
    s.psi_y = psi_of(t, "psi_y", ny);
    if (t.count("solution")) {
      const Vec sol = vec_of(t, "solution", nx + ny);
      s.saddle_x = Vec(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(nx));
      s.saddle_y = Vec(sol.begin() + static_cast<std::ptrdiff_t>(nx), sol.end());
    }
    s.validate();
    out.saddle = std::move(s);
    return out;
  }
  if (type == "vip") {
    const Vec dv = numbers(need(t, "dims"), "dims");
    std::vector<std::size_t> dims;
    std::size_t n = 0;
    for (double d : dv) {
      if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d)))
        throw ConfigError("instance file: dims must be positive integers");
      dims.push_back(static_cast<std::size_t>(d));
      n += dims.back();
    }
    const std::size_t k = dims.size();
    const Matrix m = mat_of(t, "m", n, n);
    const Vec b = vec_of(t, "b", n);
    const Vec D = vec_of(t, "D", k);
    const Vec z0 = vec_of(t, "z0", n);
    VipInstance v = make_polymatrix_vip(dims, m, b, D, z0);
    v.kind = kind;
    v.lipschitz = mat_of(t, "L", k, k);
    for (std::size_t i = 0; i < k; ++i) {
      if (auto mm = metric_of(t, "metric_" + std::to_string(i + 1), dims[i])) v.metrics[i] = *mm;
      v.psis[i] = psi_of(t, "psi_" + std::to_string(i + 1), dims[i]);
    }
    if (t.count("solution")) v.solution = vec_of(t, "solution", n);
    v.validate();
    out.vip = std::move(v);
    return out;
  }
  throw ConfigError("instance file: type must be saddle or vip");
}

LoadedInstance load_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open instance file " + path);
  return read_instance(f);
}

void save_instance(const std::string& path, const SaddleInstance& sp) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write instance file " + path);
  write_instance(f, sp);
}

void save_instance(const std::string& path, const VipInstance& vip) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write instance file " + path);
  write_instance(f, vip);
}

}  // namespace saddle
