#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saddle/problems.hpp"

namespace saddle {

using KeyValues = std::map<std::string, std::string>;

struct InstanceSpec {
  std::string id;
  KeyValues keys;  // always has "kind"
};

struct SolverSpec {
  std::string name;
  std::string type;  // dm, eg or dgda
  KeyValues keys;
};

// INI-style configuration:
//   [experiment]       epsilons, solvers, seed, check_bounds, timing, max_rounds
//   [instance.NAME]    kind = ... plus kind-specific keys
//   [solver.NAME]      type = dm | eg | dgda plus options
// Solvers listed in [experiment] without a section use their name as type.
struct ExperimentConfig {
  std::vector<InstanceSpec> instances;
  std::vector<SolverSpec> solvers;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  bool check_bounds = false;
  bool timing = false;  // wall_ms is 0 unless enabled, keeping outputs byte-stable
  std::size_t max_rounds = 100000;
  std::size_t jobs = 1;
  std::string base_dir;  // for relative instance file paths
};

ExperimentConfig parse_config(std::istream& is, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

struct BuiltInstance {
  std::optional<SaddleInstance> saddle;
  std::optional<VipInstance> vip;
  std::size_t agents() const;
};

// Random kinds draw from a generator seeded by (seed, instance id).
BuiltInstance build_instance(const InstanceSpec& spec, std::uint64_t seed,
                             const std::string& base_dir = ".");

struct ResultRow {
  std::string instance_id;
  std::string solver;
  double epsilon = 0.0;
  std::size_t rounds = 0;
  std::vector<std::size_t> queries;
  double weighted_cost = 0.0;
  double gap = 0.0;
  bool gap_exact = false;
  std::optional<double> bound_comm;
  std::optional<double> bound_oracle;
  std::optional<bool> compliant;
  double wall_ms = 0.0;
  // Written to status.csv, not results.csv.
  std::string status;
  std::string note;
};

// Rows sorted by (instance, solver, epsilon).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

bool any_violation(const std::vector<ResultRow>& rows);

// Agent columns: queries_x,queries_y when every row has two agents and
// `saddle_names` is set, else queries_1..queries_K.
std::string results_csv(const std::vector<ResultRow>& rows, bool saddle_names);
std::vector<ResultRow> parse_results_csv(const std::string& text);

// results.csv, status.csv and one SVG per instance.
void emit_outputs(const std::vector<ResultRow>& rows, const std::string& directory,
                  bool saddle_names);

std::string rounds_svg(const std::vector<ResultRow>& rows, const std::string& instance_id);

}  // namespace saddle
