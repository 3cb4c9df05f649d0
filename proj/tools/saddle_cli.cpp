#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "saddle/errors.hpp"
#include "saddle/evaluation.hpp"
#include "saddle/experiment.hpp"
#include "saddle/hard_instances.hpp"
#include "saddle/instance_io.hpp"
#include "saddle/kernels.hpp"
#include "saddle/verify_suite.hpp"

namespace {

// Exit codes: 0 ok, 1 bound violation or failed invariant, 2 bad input,
// 3 unexpected runtime failure.
constexpr int kOk = 0, kViolation = 1, kBadInput = 2, kInternal = 3;

void print_value(const char* key, double v) { std::printf("%-14s = %.12g\n", key, v); }

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, std::optional<std::size_t> jobs,
                bool check_bounds) {
  saddle::ExperimentConfig cfg = saddle::load_config(config_path);
  if (seed) cfg.seed = *seed;
  if (jobs) cfg.jobs = *jobs;
  if (check_bounds) cfg.check_bounds = true;
  bool saddle_names = true;
  for (const auto& spec : cfg.instances)
    if (!saddle::build_instance(spec, cfg.seed, cfg.base_dir).saddle) saddle_names = false;
  const auto rows = saddle::run_experiment(cfg);
  saddle::emit_outputs(rows, out_dir, saddle_names);
  std::size_t errors = 0, checked = 0, violations = 0;
  for (const auto& r : rows) {
    if (r.status == "error") {
      ++errors;
      std::fprintf(stderr, "error: %s/%s eps=%g: %s\n", r.instance_id.c_str(), r.solver.c_str(),
                   r.epsilon, r.note.c_str());
    }
    if (r.compliant) {
      ++checked;
      if (!*r.compliant) ++violations;
    }
  }
  std::printf("%zu rows written to %s (%zu errors, %zu bound checks, %zu violations)\n",
              rows.size(), out_dir.c_str(), errors, checked, violations);
  return cfg.check_bounds && saddle::any_violation(rows) ? kViolation : kOk;
}

int hard_instance_command(const std::string& subclass, double L, double dx, double dy,
                          std::size_t k, double eps, std::size_t m, std::size_t n,
                          const std::string& out) {
  if (k == 0) {
    if (!(eps > 0.0)) throw saddle::ParameterError("hard-instance: give --k or a positive --eps");
    k = saddle::hard_instance_k(L, dx, dy, eps);
    if (k == 0) throw saddle::ParameterError("hard-instance: eps too large, k would be 0");
  }
  if (m == 0) m = 2 * k + 2;
  if (n == 0) n = 2 * k + 2;
  const saddle::SaddleInstance sp = saddle::make_subclass_instance(subclass, L, dx, dy, k, m, n);
  if (out.empty() || out == "-") {
    saddle::write_instance(std::cout, sp);
  } else {
    saddle::save_instance(out, sp);
    std::printf("wrote %s instance with k = %zu (%zu x %zu) to %s\n", subclass.c_str(), k, m, n,
                out.c_str());
  }
  return kOk;
}

int verify_command(std::uint64_t seed) {
  std::printf("kernels: %s\n", std::string(saddle::kernels::isa_name(saddle::kernels::active().isa)).c_str());
  bool all = true;
  for (const auto& s : saddle::run_invariant_suites(seed)) {
    std::printf("%s %-20s %s\n", s.ok ? "PASS" : "FAIL", s.name.c_str(), s.detail.c_str());
    all = all && s.ok;
  }
  return all ? kOk : kViolation;
}

int bounds_command(const saddle::BoundsInput& in) {
  const saddle::BoundsReport b = saddle::complexity_bounds(in);
  print_value("theta", b.theta);
  print_value("dmsp_comm", b.dmsp_comm);
  print_value("dmsp_oracle", b.dmsp_oracle);
  print_value("eg_comm", b.eg_comm);
  print_value("eg_oracle", b.eg_oracle);
  print_value("cat_eg_comm", b.cat_eg_comm);
  print_value("catcat_comm", b.catcat_comm);
  print_value("lower_comm", b.lower_comm);
  print_value("lower_oracle", b.lower_oracle);
  std::printf("# cat_eg_comm and catcat_comm are order-only (constants omitted)\n");
  if (in.L_xy > 0.0) {
    saddle::SaddleParams p{in.L_x, in.L_xy, in.L_y, in.D_x, in.D_y};
    const double hx = in.Dhat_x > 0.0 ? in.Dhat_x : in.D_x;
    const double hy = in.Dhat_y > 0.0 ? in.Dhat_y : in.D_y;
    const saddle::DmSpBounds d = saddle::dm_sp_bounds(p, in.epsilon, hx, hy, in.c_x, in.c_y);
    print_value("dm_T", static_cast<double>(d.T));
    print_value("dm_queries_x", d.queries_x);
    print_value("dm_queries_y", d.queries_y);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupled saddle-point and variational inequality solvers with round and query accounting"};
  app.require_subcommand(1);

  std::string config, out = "results";
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  bool check_bounds = false;
  auto* run = app.add_subcommand("run", "run an experiment grid from a config file");
  run->add_option("--config", config, "experiment config")->required();
  run->add_option("--out", out, "output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  auto* jobs_opt = run->add_option("--jobs", jobs, "parallel grid cells")->check(CLI::PositiveNumber);
  run->add_flag("--check-bounds", check_bounds, "exit 1 on any bound violation");

  std::string subclass = "xy", hard_out;
  double L = 1.0, dx = 1.0, dy = 1.0, eps = 0.0;
  std::size_t k = 0, m = 0, n = 0;
  auto* hard = app.add_subcommand("hard-instance", "emit a lower-bound construction");
  hard->add_option("--subclass", subclass, "x, y or xy")->check(CLI::IsMember({"x", "y", "xy"}))->capture_default_str();
  hard->add_option("--L", L, "class smoothness constant")->capture_default_str();
  hard->add_option("--Dx", dx)->capture_default_str();
  hard->add_option("--Dy", dy)->capture_default_str();
  hard->add_option("--k", k, "Krylov depth (or derive it from --eps)");
  hard->add_option("--eps", eps, "target accuracy used to pick k");
  hard->add_option("--m", m, "rows of A (default 2k+2)");
  hard->add_option("--n", n, "columns of A (default 2k+2)");
  hard->add_option("--out", hard_out, "instance file, '-' for stdout");

  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "run the randomized invariant suites");
  verify->add_option("--seed", verify_seed)->capture_default_str();

  saddle::BoundsInput bin;
  auto* bounds = app.add_subcommand("bounds", "print complexity bounds for given constants");
  bounds->add_option("--Lx", bin.L_x)->capture_default_str();
  bounds->add_option("--Lxy", bin.L_xy)->capture_default_str();
  bounds->add_option("--Ly", bin.L_y)->capture_default_str();
  bounds->add_option("--Dx", bin.D_x)->capture_default_str();
  bounds->add_option("--Dy", bin.D_y)->capture_default_str();
  bounds->add_option("--Dhx", bin.Dhat_x, "distance estimate for x (default Dx)");
  bounds->add_option("--Dhy", bin.Dhat_y, "distance estimate for y (default Dy)");
  bounds->add_option("--cx", bin.c_x)->capture_default_str();
  bounds->add_option("--cy", bin.c_y)->capture_default_str();
  bounds->add_option("--eps", bin.epsilon)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*run)
      return run_command(config, out, seed_opt->count() ? std::optional(seed) : std::nullopt,
                         jobs_opt->count() ? std::optional(jobs) : std::nullopt, check_bounds);
    if (*hard) return hard_instance_command(subclass, L, dx, dy, k, eps, m, n, hard_out);
    if (*verify) return verify_command(verify_seed);
    if (*bounds) return bounds_command(bin);
  } catch (const saddle::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInternal;
  }
  return kOk;
}
