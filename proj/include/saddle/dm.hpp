#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saddle/baseline.hpp"
#include "saddle/composite.hpp"
#include "saddle/evaluation.hpp"
#include "saddle/geometry.hpp"
#include "saddle/ledger.hpp"
#include "saddle/problems.hpp"

namespace saddle {

// ---------------------------------------------------------------------------
// Subproblem criteria
// ---------------------------------------------------------------------------

// Block residual problem: find w with ||V_w(w) + psi'(w)||_* <= delta ||w - v||.
struct MrnTask {
  std::function<Vec(const Vec&)> op;  // V_w; metered by whoever builds the task
  CompositeTerm psi;
  Vec anchor;
  double delta = 1.0;
  ScaledMetric metric{1};
  double mu = 0.0;         // strong monotonicity of V_w + psi, 0 if unknown
  double lipschitz = 0.0;  // of V_w
};

// Joint subproblem: ||V(z) + psi'(z) + lambda P (z - v)||_* <= lambda ||z - v||.
struct MssTask {
  const VipInstance* vip = nullptr;
  Vec anchor;
  double lambda = 2.0;
  AssembledMetric metric;
};

struct CheckResult {
  bool ok = false;
  double slack = 0.0;  // lhs - rhs
};

constexpr double kCriterionTolerance = 1e-10;

CheckResult mss_check(const MssTask& task, const Vec& z, const Vec& v_at_z, const Vec& psi_prime);
// Evaluates V(z) unmetered.
CheckResult mss_check(const MssTask& task, const Vec& z, const Vec& psi_prime);

CheckResult mrn_check_residual(const MrnTask& task, const Vec& w, double residual_norm);
CheckResult mrn_check(const MrnTask& task, const Vec& w, const Vec& v_at_w, const Vec& psi_prime);

// a = 2 <Vpsi, v - z> / ||Vpsi||_*^2; nullopt when ||Vpsi||_* <= 1e-14, which
// means z solves the problem.
std::optional<double> rom_stepsize(const Vec& v_psi, const Vec& v, const Vec& z,
                                   const AssembledMetric& metric);

// ---------------------------------------------------------------------------
// Inner solvers
// ---------------------------------------------------------------------------

struct ArmSchedule {
  std::size_t tau = 0;
  Vec sigma;                       // sigma[k-1] for k = 1..tau
  std::vector<std::size_t> steps;  // N_k, clamped to >= 1
  Vec lipschitz;                   // L + sigma_k
  std::size_t total_steps() const;
};

ArmSchedule make_arm_schedule(double lipschitz, double xi);

// Query budget 34 sqrt(3L / (2 xi)) of the accumulative regularization method.
double arm_query_bound(double lipschitz, double xi);

struct InnerResult {
  Vec w;
  Vec subgradient;        // element of d psi(w) for the task's psi
  std::size_t queries = 0;
  double residual_bound = 0.0;  // certified upper bound on ||V(w) + psi'(w)||_*
  bool early_exit = false;
};

// Accumulative regularization with accelerated inner loops. Runs the fixed
// schedule and returns as soon as a query-free certificate proves
// xi-distance-to-solution accuracy. With L = 0 the gradient is constant and
// is queried once.
InnerResult arm_solve(const MrnTask& task, double xi);

// Anchored extragradient: coefficient 1/(t+2), step 1/(2L) (1/mu if L = 0),
// stopping the moment the relative criterion holds at the task's delta.
InnerResult feg_solve(const MrnTask& task, std::size_t max_queries = 1000000);

// ---------------------------------------------------------------------------
// Decoupled method
// ---------------------------------------------------------------------------

enum class InnerSolver { kAuto, kArm, kFeg };

struct DmParams {
  Vec alphas;
  double lambda = 0.0;  // 0: 2 Lbar_c (equals 2 for the default alphas)
  std::function<double(std::size_t)> lambda_schedule;  // overrides lambda when set
  double epsilon = 1e-2;
  Vec dhat;
  std::vector<InnerSolver> solvers;  // per block, empty = auto
  std::size_t max_rounds = 200000;
  std::size_t gap_stride = 1;
  std::optional<Vec> reference_solution;  // for the descent-inequality check
};

// Coupled conditioning constant from declared Lbar, D and alphas.
double coupled_conditioning(const VipInstance& vip, const Vec& alphas);

struct MssOutput {
  Vec z;
  Vec subgradient;
  std::vector<std::size_t> inner_queries;
  std::vector<bool> certified;  // block criterion certified by the inner solver
  Vec arm_bounds;               // per block query bound, -1 for non-ARM blocks
};

using MssSolver = std::function<MssOutput(const MssTask&, Ledger&)>;

// Frozen-remote decomposition: block i solves its residual problem with
// psi_i + (alpha_i lambda/2)||. - v_i||^2 at delta_i = alpha_i lambda/2, the
// regularizer is then removed from the subgradient. Queries are recorded on
// the ledger (no round boundary). Requires lambda >= 2 Lbar_c.
MssOutput fds_solve(const MssTask& task, const std::vector<InnerSolver>& solvers,
                    Ledger& ledger);

struct RomIteration {
  std::size_t t = 0;
  double a = 0.0;
  double lambda = 0.0;
  double gap = 0.0;
  std::size_t rounds = 0;
};

struct DmResult : RunResult {
  std::vector<RomIteration> history;
  std::size_t iterations = 0;
  double min_a_lambda = 0.0;       // min over iterations of a_{t+1} lambda_{t+1}
  double descent_violation = 0.0;  // max(lhs - rhs) of the telescoped inequality
  bool descent_checked = false;
  std::size_t arm_calls = 0;
  std::size_t arm_max_queries = 0;
  double arm_worst_ratio = 0.0;  // max over calls of queries / query bound
  std::size_t uncertified_blocks = 0;
  Vec alphas;
  double lambda = 0.0;
  std::vector<bool> decoupled;  // blocks solved locally
};

// Outer loop: MSS solve (round 1: exchange z), operator exchange (round 2),
// reduced step size, ergodic average, anchor step.
DmResult rom_run(const VipInstance& vip, const DmParams& params, const MssSolver& solver,
                 Ledger& ledger, const GapOracle& gap, const RoundObserver& observer = {});

DmResult dm_vip_run(const VipInstance& vip, double epsilon, Ledger& ledger,
                    DmParams params = {}, const GapOracle& gap = {},
                    const RoundObserver& observer = {});

DmResult dm_sp_run(const SaddleInstance& sp, double epsilon, double dhat_x, double dhat_y,
                   Ledger& ledger, DmParams params = {}, const RoundObserver& observer = {});

}  // namespace saddle
