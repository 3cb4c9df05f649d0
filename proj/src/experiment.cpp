#include "saddle/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "saddle/baseline.hpp"
#include "saddle/dm.hpp"
#include "saddle/errors.hpp"
#include "saddle/evaluation.hpp"
#include "saddle/hard_instances.hpp"
#include "saddle/instance_io.hpp"

namespace saddle {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": '" + t + "' is not a number");
  }
}

// "[1, 2, 3]", "1, 2, 3" or "1 2 3".
Vec parse_list(const std::string& text, const std::string& where) {
  std::string s;
  for (char c : text) s += (c == '[' || c == ']' || c == ',') ? ' ' : c;
  std::istringstream ss(s);
  Vec out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_number(tok, where));
  return out;
}

// "[[1, 2], [3, 4]]"
Matrix parse_matrix(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t.size() < 4 || t.compare(0, 2, "[[") != 0)
    throw ConfigError(where + ": matrix must be written as [[row], [row], ...]");
  std::vector<Vec> rows;
  std::size_t pos = 1;
  while (true) {
    const auto open = t.find('[', pos);
    if (open == std::string::npos) break;
    const auto close = t.find(']', open);
    if (close == std::string::npos) throw ConfigError(where + ": unbalanced brackets");
    rows.push_back(parse_list(t.substr(open + 1, close - open - 1), where));
    pos = close + 1;
  }
  if (rows.empty() || rows[0].empty()) throw ConfigError(where + ": empty matrix");
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw ConfigError(where + ": ragged matrix rows");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

bool parse_bool(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(where + ": expected true or false, got '" + t + "'");
}

std::size_t parse_count(const std::string& text, const std::string& where) {
  const double v = parse_number(text, where);
  if (v < 0 || v != std::floor(v)) throw ConfigError(where + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

class Keys {
 public:
  Keys(const KeyValues& kv, std::string where) : kv_(kv), where_(std::move(where)) {}
  bool has(const std::string& k) const { return kv_.count(k) != 0; }
  std::string at(const std::string& k) const { return where_ + " key '" + k + "'"; }
  const std::string& raw(const std::string& k) const {
    auto it = kv_.find(k);
    if (it == kv_.end()) throw ConfigError(where_ + ": missing key '" + k + "'");
    return it->second;
  }
  double num(const std::string& k) const { return parse_number(raw(k), at(k)); }
  double num(const std::string& k, double dflt) const { return has(k) ? num(k) : dflt; }
  std::size_t count(const std::string& k) const { return parse_count(raw(k), at(k)); }
  std::size_t count(const std::string& k, std::size_t dflt) const {
    return has(k) ? count(k) : dflt;
  }
  Vec list(const std::string& k) const { return parse_list(raw(k), at(k)); }
  Matrix matrix(const std::string& k) const { return parse_matrix(raw(k), at(k)); }
  std::string str(const std::string& k) const { return trim(raw(k)); }

 private:
  const KeyValues& kv_;
  std::string where_;
};

std::uint64_t instance_seed(std::uint64_t seed, const std::string& id) {
  std::seed_seq seq(id.begin(), id.end());
  std::vector<std::uint32_t> mix(2);
  seq.generate(mix.begin(), mix.end());
  return seed * 0x9E3779B97F4A7C15ull ^ (static_cast<std::uint64_t>(mix[0]) << 32 | mix[1]);
}

void apply_costs(const Keys& k, Vec& costs, std::size_t agents) {
  if (k.has("costs")) {
    Vec c = k.list("costs");
    if (c.size() != agents) throw ConfigError(k.at("costs") + ": one cost per agent");
    costs = c;
  } else if (agents == 2 && (k.has("cx") || k.has("cy"))) {
    costs = {k.num("cx", 1.0), k.num("cy", 1.0)};
  }
}

}  // namespace

std::size_t BuiltInstance::agents() const {
  if (saddle) return 2;
  if (vip) return vip->blocks();
  return 0;
}

ExperimentConfig parse_config(std::istream& is, const std::string& base_dir) {
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  KeyValues experiment;
  std::map<std::string, KeyValues> instances, solvers;
  std::vector<std::string> instance_order;
  KeyValues* current = nullptr;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "experiment") {
        current = &experiment;
      } else if (name.rfind("instance.", 0) == 0 && name.size() > 9) {
        const std::string id = name.substr(9);
        if (instances.count(id)) throw ConfigError(where + ": duplicate instance '" + id + "'");
        instance_order.push_back(id);
        current = &instances[id];
      } else if (name.rfind("solver.", 0) == 0 && name.size() > 7) {
        current = &solvers[name.substr(7)];
      } else {
        throw ConfigError(where + ": unknown section '" + name + "'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    if (!current) throw ConfigError(where + ": key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where + ": empty key");
    (*current)[key] = trim(line.substr(eq + 1));
  }

  const Keys ex(experiment, "[experiment]");
  if (!ex.has("epsilons")) throw ConfigError("[experiment]: missing key 'epsilons'");
  for (double e : ex.list("epsilons")) {
    if (!(e > 0.0)) throw ConfigError("[experiment] key 'epsilons': entries must be > 0");
    cfg.epsilons.push_back(e);
  }
  if (cfg.epsilons.empty()) throw ConfigError("[experiment] key 'epsilons': empty list");
  cfg.seed = ex.count("seed", 0);
  if (ex.has("check_bounds")) cfg.check_bounds = parse_bool(ex.raw("check_bounds"), ex.at("check_bounds"));
  if (ex.has("timing")) cfg.timing = parse_bool(ex.raw("timing"), ex.at("timing"));
  cfg.max_rounds = ex.count("max_rounds", cfg.max_rounds);
  cfg.jobs = std::max<std::size_t>(1, ex.count("jobs", 1));

  std::vector<std::string> solver_names;
  if (ex.has("solvers")) {
    for (const std::string& s : split(ex.raw("solvers"), ',')) {
      const std::string name = trim(s);
      if (!name.empty()) solver_names.push_back(name);
    }
  } else {
    for (const auto& [name, kv] : solvers) solver_names.push_back(name);
  }
  if (solver_names.empty()) throw ConfigError("[experiment]: no solvers listed");
  for (const std::string& name : solver_names) {
    SolverSpec spec;
    spec.name = name;
    auto it = solvers.find(name);
    if (it != solvers.end()) spec.keys = it->second;
    spec.type = spec.keys.count("type") ? trim(spec.keys.at("type")) : name;
    if (spec.type != "dm" && spec.type != "eg" && spec.type != "dgda")
      throw ConfigError("solver '" + name + "': type must be dm, eg or dgda");
    cfg.solvers.push_back(std::move(spec));
  }
  if (instance_order.empty()) throw ConfigError("config: no [instance.NAME] sections");
  for (const std::string& id : instance_order) {
    InstanceSpec spec{id, instances[id]};
    if (!spec.keys.count("kind")) throw ConfigError("[instance." + id + "]: missing key 'kind'");
    cfg.instances.push_back(std::move(spec));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(f, dir.empty() ? "." : dir);
}

BuiltInstance build_instance(const InstanceSpec& spec, std::uint64_t seed,
                             const std::string& base_dir) {
  const Keys k(spec.keys, "[instance." + spec.id + "]");
  const std::string kind = k.str("kind");
  Rng rng(instance_seed(seed, spec.id));
  BuiltInstance out;
  if (kind == "bilinear") {
    out.saddle = make_bilinear_sp(k.matrix("a"), k.list("b"), k.num("Dx", 1.0), k.num("Dy", 1.0));
  } else if (kind == "quadratic") {
    QuadraticSaddleData d;
    d.a = k.matrix("a");
    const std::size_t nx = d.a.cols(), ny = d.a.rows();
    d.hx = k.has("hx") ? k.matrix("hx") : Matrix(nx, nx);
    d.hy = k.has("hy") ? k.matrix("hy") : Matrix(ny, ny);
    d.gx = k.has("gx") ? k.list("gx") : Vec(nx, 0.0);
    d.gy = k.has("gy") ? k.list("gy") : Vec(ny, 0.0);
    out.saddle = make_quadratic_saddle(std::move(d), Vec(nx, 0.0), Vec(ny, 0.0), k.num("Dx", 1.0),
                                       k.num("Dy", 1.0));
  } else if (kind == "quadratic-sp") {
    const std::string side = k.str("side");
    if (side != "x" && side != "y") throw ConfigError(k.at("side") + ": must be x or y");
    out.saddle = make_quadratic_sp(k.matrix("a"), k.list("b"), side[0], k.num("D", 1.0));
  } else if (kind == "scsc") {
    out.saddle = make_weakly_coupled_scsc(k.num("mu_x", 1.0), k.num("mu_y", 1.0), k.num("c"),
                                          k.count("n", 2));
  } else if (kind == "polymatrix") {
    std::vector<std::size_t> dims;
    for (double d : k.list("dims")) dims.push_back(parse_count(fmt(d), k.at("dims")));
    std::optional<Vec> D;
    if (k.has("D")) D = k.list("D");
    out.vip = make_polymatrix_vip(dims, k.matrix("m"), k.list("b"), D);
  } else if (kind == "random-bilinear") {
    out.saddle = random_bilinear(k.count("nx", 5), k.count("ny", 5), k.num("Lxy", 1.0),
                                 k.num("Dx", 1.0), k.num("Dy", 1.0), rng);
  } else if (kind == "random-quadratic") {
    out.saddle = random_quadratic_saddle(k.count("nx", 5), k.count("ny", 5), k.num("Lx", 1.0),
                                         k.num("Lxy", 1.0), k.num("Ly", 1.0), k.num("Dx", 1.0),
                                         k.num("Dy", 1.0), rng);
  } else if (kind == "random-polymatrix") {
    std::vector<std::size_t> dims;
    for (double d : k.list("dims")) dims.push_back(parse_count(fmt(d), k.at("dims")));
    Vec D = k.has("D") ? k.list("D") : Vec(dims.size(), 1.0);
    if (D.size() == 1) D.assign(dims.size(), D[0]);
    out.vip = random_polymatrix(dims, k.num("coupling", 1.0), k.num("diagonal", 0.0), D, rng);
  } else if (kind == "hard") {
    const std::size_t kk = k.count("k");
    out.saddle = make_subclass_instance(k.str("subclass"), k.num("L", 1.0), k.num("Dx", 1.0),
                                        k.num("Dy", 1.0), kk, k.count("m", 2 * kk + 2),
                                        k.count("n", 2 * kk + 2));
  } else if (kind == "file") {
    std::filesystem::path p(k.str("path"));
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    LoadedInstance li = load_instance(p.string());
    out.saddle = std::move(li.saddle);
    out.vip = std::move(li.vip);
  } else {
    throw ConfigError(k.at("kind") + ": unknown instance kind '" + kind + "'");
  }
  if (out.saddle) apply_costs(k, out.saddle->costs, 2);
  if (out.vip) {
    if (out.vip->costs.size() != out.vip->blocks()) out.vip->costs.assign(out.vip->blocks(), 1.0);
    apply_costs(k, out.vip->costs, out.vip->blocks());
  }
  return out;
}

namespace {

struct Cell {
  std::size_t instance;
  std::size_t solver;
  double epsilon;
};

void fill_from(ResultRow& row, const RunResult& r) {
  row.rounds = r.rounds;
  row.queries = r.queries;
  row.weighted_cost = r.weighted_cost;
  row.gap = r.gap.value;
  row.gap_exact = r.gap.exact;
  row.status = status_name(r.status);
  row.note = r.note;
}

void decide(ResultRow& row) {
  if (!row.bound_comm && !row.bound_oracle) return;
  if (row.status == "error" || row.status == "diverged") return;
  if (!row.gap_exact) return;
  bool ok = row.status == "converged" || row.status == "solution-found";
  if (row.bound_comm) ok = ok && static_cast<double>(row.rounds) <= *row.bound_comm + 1e-9;
  if (row.bound_oracle) ok = ok && row.weighted_cost <= *row.bound_oracle + 1e-9;
  row.compliant = ok;
}

ResultRow run_cell(const BuiltInstance& inst, const InstanceSpec& ispec, const SolverSpec& sspec,
                   double eps, const ExperimentConfig& cfg) {
  ResultRow row;
  row.instance_id = ispec.id;
  row.solver = sspec.name;
  row.epsilon = eps;
  const Keys k(sspec.keys, "[solver." + sspec.name + "]");
  const std::size_t max_rounds = k.count("max_rounds", cfg.max_rounds);
  const auto start = std::chrono::steady_clock::now();
  try {
    if (inst.saddle) {
      const SaddleInstance& sp = *inst.saddle;
      const SaddleParams& p = sp.declared;
      const double dhx = k.has("dhat_x") ? k.num("dhat_x") : k.num("dhat_scale_x", 1.0) * p.D_x;
      const double dhy = k.has("dhat_y") ? k.num("dhat_y") : k.num("dhat_scale_y", 1.0) * p.D_y;
      Ledger ledger(2, sp.costs, false);
      if (sspec.type == "dm") {
        DmParams params;
        params.max_rounds = max_rounds;
        params.gap_stride = k.count("gap_stride", 1);
        const DmResult r = dm_sp_run(sp, eps, dhx, dhy, ledger, params);
        fill_from(row, r);
        if (p.L_xy > 0.0) {
          const DmSpBounds b = dm_sp_bounds(p, eps, dhx, dhy, sp.costs[0], sp.costs[1]);
          row.bound_comm = b.comm;
          row.bound_oracle = b.weighted;
        } else {
          row.bound_comm = 2.0;
        }
      } else if (sspec.type == "eg") {
        EgParams params;
        params.eta = k.num("eta", 1.0);
        params.max_rounds = max_rounds;
        params.epsilon = eps;
        params.dhat = {dhx, dhy};
        const RunResult r = eg_run(sp, params, ledger);
        fill_from(row, r);
        if (params.eta == 1.0) {
          const double bound = eg_round_bound(p, eps, dhx, dhy);
          row.bound_comm = bound;
          row.bound_oracle = (sp.costs[0] + sp.costs[1]) * bound;
        }
      } else {
        DgdaParams params;
        params.tau = k.count("tau", 1);
        params.eta_x = k.num("eta_x", 0.0);
        params.eta_y = k.num("eta_y", 0.0);
        params.max_rounds = max_rounds;
        params.epsilon = eps;
        fill_from(row, dgda_run(sp, params, ledger));
      }
    } else {
      const VipInstance& vip = *inst.vip;
      Ledger ledger(vip.blocks(), vip.costs, false);
      Vec dhat = vip.D;
      const double scale = k.num("dhat_scale", 1.0);
      for (double& d : dhat) d *= scale;
      if (sspec.type == "dm") {
        DmParams params;
        params.max_rounds = max_rounds;
        params.gap_stride = k.count("gap_stride", 1);
        params.dhat = dhat;
        fill_from(row, dm_vip_run(vip, eps, ledger, params));
        if (scale == 1.0) row.bound_comm = dm_vip_round_bound(vip, eps);
      } else if (sspec.type == "eg") {
        EgParams params;
        params.eta = k.num("eta", 1.0);
        params.max_rounds = max_rounds;
        params.epsilon = eps;
        params.dhat = dhat;
        VipGapEvaluator evaluator(vip, default_domain(vip));
        fill_from(row, eg_run(vip, params, ledger, [&](const Vec& z) { return evaluator(z); }));
      } else {
        row.status = "unsupported";
        row.note = "dgda needs a saddle instance";
        row.queries.assign(vip.blocks(), 0);
      }
    }
  } catch (const std::exception& e) {
    row.status = "error";
    row.note = e.what();
    row.gap = std::numeric_limits<double>::quiet_NaN();
    row.queries.assign(inst.agents(), 0);
  }
  const auto stop = std::chrono::steady_clock::now();
  if (cfg.timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  decide(row);
  return row;
}

bool row_less(const ResultRow& a, const ResultRow& b) {
  if (a.instance_id != b.instance_id) return a.instance_id < b.instance_id;
  if (a.solver != b.solver) return a.solver < b.solver;
  return a.epsilon < b.epsilon;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  std::vector<BuiltInstance> built;
  for (const InstanceSpec& spec : cfg.instances) built.push_back(build_instance(spec, cfg.seed, cfg.base_dir));
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cfg.instances.size(); ++i)
    for (std::size_t s = 0; s < cfg.solvers.size(); ++s)
      for (double e : cfg.epsilons) cells.push_back(Cell{i, s, e});

  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      const Cell& cell = cells[c];
      rows[c] = run_cell(built[cell.instance], cfg.instances[cell.instance],
                         cfg.solvers[cell.solver], cell.epsilon, cfg);
    }
  };
  const std::size_t jobs = std::min(std::max<std::size_t>(1, cfg.jobs), std::max<std::size_t>(1, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::stable_sort(rows.begin(), rows.end(), row_less);
  return rows;
}

bool any_violation(const std::vector<ResultRow>& rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ResultRow& r) { return r.compliant && !*r.compliant; });
}

std::string results_csv(const std::vector<ResultRow>& rows, bool saddle_names) {
  std::size_t agents = 0;
  for (const ResultRow& r : rows) agents = std::max(agents, r.queries.size());
  const bool xy = saddle_names && (agents == 2 || rows.empty());
  if (rows.empty()) agents = saddle_names ? 2 : agents;
  std::ostringstream os;
  os << "instance_id,solver,epsilon,rounds";
  if (xy) {
    os << ",queries_x,queries_y";
  } else {
    for (std::size_t i = 0; i < agents; ++i) os << ",queries_" << i + 1;
  }
  os << ",weighted_cost,gap,gap_exact,bound_comm,bound_oracle,compliant,wall_ms\n";
  for (const ResultRow& r : rows) {
    os << r.instance_id << ',' << r.solver << ',' << fmt(r.epsilon) << ',' << r.rounds;
    for (std::size_t i = 0; i < agents; ++i) {
      os << ',';
      if (i < r.queries.size()) os << r.queries[i];
    }
    os << ',' << fmt(r.weighted_cost) << ',' << fmt(r.gap) << ',' << (r.gap_exact ? "true" : "false")
       << ',' << (r.bound_comm ? fmt(*r.bound_comm) : "") << ','
       << (r.bound_oracle ? fmt(*r.bound_oracle) : "") << ','
       << (r.compliant ? (*r.compliant ? "true" : "false") : "") << ',' << fmt(r.wall_ms) << '\n';
  }
  return os.str();
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("results csv: empty input");
  const std::vector<std::string> header = split(line, ',');
  const std::size_t fixed = 11;
  if (header.size() < fixed || header[0] != "instance_id" || header.back() != "wall_ms")
    throw ConfigError("results csv: unexpected header");
  const std::size_t agents = header.size() - fixed;
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    const std::string where = "results csv line " + std::to_string(lineno);
    if (f.size() != header.size()) throw ConfigError(where + ": wrong column count");
    ResultRow r;
    r.instance_id = f[0];
    r.solver = f[1];
    r.epsilon = parse_number(f[2], where);
    r.rounds = parse_count(f[3], where);
    for (std::size_t i = 0; i < agents; ++i)
      if (!f[4 + i].empty()) r.queries.push_back(parse_count(f[4 + i], where));
    std::size_t c = 4 + agents;
    r.weighted_cost = parse_number(f[c++], where);
    r.gap = f[c] == "nan" || f[c] == "-nan" ? std::numeric_limits<double>::quiet_NaN()
                                             : parse_number(f[c], where);
    ++c;
    r.gap_exact = f[c++] == "true";
    if (!f[c].empty()) r.bound_comm = parse_number(f[c], where);
    ++c;
    if (!f[c].empty()) r.bound_oracle = parse_number(f[c], where);
    ++c;
    if (!f[c].empty()) r.compliant = f[c] == "true";
    ++c;
    r.wall_ms = parse_number(f[c], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string rounds_svg(const std::vector<ResultRow>& rows, const std::string& instance_id) {
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const ResultRow& r : rows) {
    if (r.instance_id != instance_id || r.rounds == 0) continue;
    const double x = std::log10(1.0 / r.epsilon), y = std::log10(static_cast<double>(r.rounds));
    series[r.solver].emplace_back(x, y);
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  const double w = 480, h = 320, pad = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << instance_id
     << ": rounds vs 1/eps (log-log)</text>\n";
  if (series.empty()) {
    os << "</svg>\n";
    return os.str();
  }
  if (xmax - xmin < 1e-9) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-9) { ymin -= 0.5; ymax += 0.5; }
  auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
  auto py = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };
  os << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\"" << h - pad
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 4.0, yv = ymin + (ymax - ymin) * t / 4.0;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << h - pad + 16 << "\" text-anchor=\"middle\" font-size=\"10\">"
       << fmt(std::pow(10.0, xv)) << "</text>\n";
    os << "<text x=\"" << pad - 6 << "\" y=\"" << fmt(py(yv) + 3) << "\" text-anchor=\"end\" font-size=\"10\">"
       << fmt(std::round(std::pow(10.0, yv))) << "</text>\n";
  }
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::size_t idx = 0;
  for (auto& [name, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = colors[idx % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : pts) os << fmt(px(x)) << ',' << fmt(py(y)) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << w - pad + 4 << "\" y=\"" << pad + 14 * idx << "\" font-size=\"10\" fill=\"" << color
       << "\">" << name << "</text>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

void emit_outputs(const std::vector<ResultRow>& rows, const std::string& directory,
                  bool saddle_names) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw ConfigError("cannot create output directory " + directory);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(fs::path(directory) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + name + " in " + directory);
    f << content;
  };
  write("results.csv", results_csv(rows, saddle_names));
  std::ostringstream st;
  st << "instance_id,solver,epsilon,status,note\n";
  for (const ResultRow& r : rows) {
    std::string note = r.note;
    std::replace(note.begin(), note.end(), ',', ';');
    std::replace(note.begin(), note.end(), '\n', ' ');
    st << r.instance_id << ',' << r.solver << ',' << fmt(r.epsilon) << ',' << r.status << ',' << note << '\n';
  }
  write("status.csv", st.str());
  std::vector<std::string> ids;
  for (const ResultRow& r : rows)
    if (std::find(ids.begin(), ids.end(), r.instance_id) == ids.end()) ids.push_back(r.instance_id);
  for (const std::string& id : ids) write(id + ".svg", rounds_svg(rows, id));
}

}  // namespace saddle
