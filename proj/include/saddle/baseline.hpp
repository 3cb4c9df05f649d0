#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "saddle/evaluation.hpp"
#include "saddle/ledger.hpp"
#include "saddle/problems.hpp"

namespace saddle {

enum class RunStatus { kConverged, kBudgetExhausted, kDiverged, kSolutionFound };

std::string status_name(RunStatus s);

struct RunResult {
  Vec candidate;
  GapResult gap;
  RunStatus status = RunStatus::kBudgetExhausted;
  std::size_t rounds = 0;
  std::vector<std::size_t> queries;
  double weighted_cost = 0.0;
  std::vector<double> gap_history;  // gap after each checked round
  std::string note;
};

// Called after every completed round with the current candidate.
using RoundObserver = std::function<void(const Ledger&, const Vec& candidate)>;

struct EgParams {
  Vec alphas;            // empty: the standard choice from declared L and Dhat
  double eta = 1.0;
  std::size_t max_rounds = 200000;
  double epsilon = 1e-2;
  Vec dhat;              // distance estimates; empty means declared D
  RoundObserver observer;
};

struct DgdaParams {
  std::size_t tau = 1;
  double eta_x = 0.0;    // 0: 1 / (2 (L_x + L_xy))
  double eta_y = 0.0;    // 0: 1 / (2 (L_y + L_xy))
  std::size_t max_rounds = 10000;
  double epsilon = 1e-2;
  double divergence_threshold = 1e8;
};

// alpha_i = (L_ii Dhat_i + sum_{j != i} Lbar_ij Dhat_j) / Dhat_i. For two
// blocks this is the classical extragradient choice.
Vec eg_default_alphas(const VipInstance& vip, const Vec& dhat);

// Mirror-prox extragradient in the assembled metric. Two rounds per
// iteration, one query per agent per round; the candidate is the eta-weighted
// ergodic average. The gap oracle is checked after every round.
RunResult eg_run(const VipInstance& vip, const EgParams& params, Ledger& ledger,
                 const GapOracle& gap);
RunResult eg_run(const SaddleInstance& sp, const EgParams& params, Ledger& ledger);

// Decoupled GDA: tau frozen-remote prox-gradient steps per agent per round.
RunResult dgda_run(const SaddleInstance& sp, const DgdaParams& params, Ledger& ledger);

}  // namespace saddle
