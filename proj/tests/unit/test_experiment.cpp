#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "saddle/errors.hpp"
#include "saddle/experiment.hpp"
#include "saddle/instance_io.hpp"

using namespace saddle;

namespace {

const char* kConfig = R"(
[experiment]
epsilons = [0.2, 0.1]
solvers = dm, eg, dgda
seed = 5

[instance.unit]
kind = bilinear
a = [[1]]
b = [1]
Dx = 1
Dy = 1

[instance.strong]
kind = scsc
mu_x = 1
mu_y = 1
c = 2
n = 2

[instance.rand]
kind = random-quadratic
nx = 4
ny = 3
Lx = 2

[solver.dgda]
type = dgda
tau = 5
eta_x = 0.5
eta_y = 0.5
max_rounds = 300
)";

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig cfg = parse(kConfig);
  CHECK(cfg.epsilons == std::vector<double>{0.2, 0.1});
  CHECK(cfg.solvers.size() == 3);
  CHECK(cfg.instances.size() == 3);
  CHECK(cfg.seed == 5);
  CHECK_FALSE(cfg.timing);
}

TEST_CASE("config errors carry context") {
  CHECK_THROWS_AS(parse("[experiment]\nepsilons = [0.1]\n[instance.a]\nkind = nope\n"), ConfigError);
  CHECK_THROWS_AS(parse("[experiment]\nepsilons = [-1]\n[instance.a]\nkind = bilinear\n"), ConfigError);
  CHECK_THROWS_AS(parse("epsilons = 1\n"), ConfigError);
  try {
    parse("[experiment]\nepsilons = [0.1]\nthis line is bad\n");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  const ExperimentConfig cfg = parse("[experiment]\nepsilons = [0.1]\nsolvers = dm\n[instance.a]\nkind = bilinear\nb = [1]\n");
  try {
    build_instance(cfg.instances[0], 0);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("'a'") != std::string::npos);
  }
}

TEST_CASE("experiment rows, bounds and determinism") {
  const ExperimentConfig cfg = parse(kConfig);
  const auto rows = run_experiment(cfg);
  REQUIRE(rows.size() == 18);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    CHECK((a.instance_id < b.instance_id ||
           (a.instance_id == b.instance_id && (a.solver < b.solver || (a.solver == b.solver && a.epsilon < b.epsilon)))));
  }
  bool saw_unit_dm = false, saw_divergence = false;
  for (const auto& r : rows) {
    if (r.instance_id == "unit" && r.solver == "dm" && r.epsilon == 0.1) {
      saw_unit_dm = true;
      CHECK(r.compliant == std::optional<bool>(true));
      CHECK(r.rounds <= 42);
      CHECK(*r.bound_comm == doctest::Approx(42.0));
    }
    if (r.instance_id == "strong" && r.solver == "dgda") {
      saw_divergence = true;
      CHECK(r.status == "diverged");
      CHECK_FALSE(r.compliant.has_value());
    }
    if (r.compliant && *r.compliant) {
      CHECK(r.rounds <= *r.bound_comm);
      if (r.bound_oracle) CHECK(r.weighted_cost <= *r.bound_oracle);
    }
  }
  CHECK(saw_unit_dm);
  CHECK(saw_divergence);
  CHECK_FALSE(any_violation(rows));

  ExperimentConfig parallel = cfg;
  parallel.jobs = 3;
  CHECK(results_csv(run_experiment(parallel), true) == results_csv(rows, true));
}

TEST_CASE("results csv round trip") {
  const auto rows = run_experiment(parse(kConfig));
  const std::string csv = results_csv(rows, true);
  CHECK(csv.rfind("instance_id,solver,epsilon,rounds,queries_x,queries_y,weighted_cost,gap,gap_exact,"
                  "bound_comm,bound_oracle,compliant,wall_ms\n", 0) == 0);
  const auto back = parse_results_csv(csv);
  CHECK(results_csv(back, true) == csv);
  CHECK(results_csv(rows, false).find("queries_1,queries_2") != std::string::npos);
}

TEST_CASE("outputs on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "saddle_experiment_test";
  std::filesystem::remove_all(dir);
  const auto rows = run_experiment(parse(kConfig));
  emit_outputs(rows, dir.string(), true);
  CHECK(std::filesystem::exists(dir / "results.csv"));
  CHECK(std::filesystem::exists(dir / "status.csv"));
  std::ifstream svg(dir / "unit.svg");
  std::string text((std::istreambuf_iterator<char>(svg)), {});
  CHECK(text.find("<polyline") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("instance files round trip") {
  Rng rng(3);
  const SaddleInstance sp = random_quadratic_saddle(3, 2, 1, 1, 1, 1, 1, rng);
  std::stringstream ss;
  write_instance(ss, sp);
  const LoadedInstance li = read_instance(ss);
  REQUIRE(li.saddle);
  const Vec z{0.3, -0.1, 0.2, 0.5, -0.4};
  const Vec x(z.begin(), z.begin() + 3), y(z.begin() + 3, z.end());
  const Vec g1 = sp.grad_x(x, y), g2 = li.saddle->grad_x(x, y);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g1[i] == doctest::Approx(g2[i]).epsilon(1e-12));
  CHECK(li.saddle->declared.L_xy == doctest::Approx(sp.declared.L_xy));

  const VipInstance vip = random_polymatrix({2, 1}, 1.0, 0.5, Vec{1, 1}, rng);
  std::stringstream vs;
  write_instance(vs, vip);
  const LoadedInstance lv = read_instance(vs);
  REQUIRE(lv.vip);
  const Vec w{0.1, 0.2, 0.3};
  const Vec a = vip.evaluate(w), b = lv.vip->evaluate(w);
  for (std::size_t i = 0; i < 3; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));

  std::istringstream bad("type = saddle\nnx = 2\n");
  CHECK_THROWS_AS(read_instance(bad), ConfigError);
}
