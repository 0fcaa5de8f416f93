#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sglbo/cost.hpp"
#include "sglbo/gp.hpp"
#include "sglbo/gradient.hpp"
#include "sglbo/rng.hpp"

namespace sglbo {

/// SGLBO hyperparameters: stochastic-gradient line Bayesian optimization
/// under a total measurement-shot budget.
struct SglboConfig {
  double kappa = 0.99;   // norm-test precision, in (0, 1)
  double alpha = 0.1;    // suffix-averaging fraction, in (0, 1]
  double beta = 3.0;     // line-search bound scale: eta_max = min(beta/||H||, pi)
  double eps = 0.1;      // cost-estimation precision scale
  std::int64_t total_shot_budget = 0;
  std::int64_t initial_grad_shots = 2;  // s_i^(0)
  LineBoSettings line_bo;
  bool record_timing = false;  // fill RunTrace::wall_ms (off: reproducible output)
};

/// Per-iteration history of one optimizer run. iterates holds theta^(0..T);
/// the remaining sequences hold one entry per completed iteration (1..T).
struct RunTrace {
  std::vector<std::vector<double>> iterates;
  std::vector<std::int64_t> cumulative_shots;
  std::vector<std::vector<std::int64_t>> s_grad_history;
  std::vector<std::int64_t> s_cost_history;
  std::vector<double> eta_history;
  std::vector<double> wall_ms;  // filled only when timing is enabled
};

struct RunResult {
  std::vector<double> suffix_average;
  std::vector<double> final_iterate;
  RunTrace trace;
  std::int64_t total_shots = 0;
  int iterations = 0;
};

/// Step-size search bound eta_max = min(beta / ||H||, pi).
double eta_max_for(const Cost& cost, double beta);

/// Shot-size floor G_grad for iteration t (0-based): 1 during the first
/// iterations (t <= 10), afterwards the mean shot size over all components
/// of the last (up to) 10 recorded vectors, rounded up.
std::int64_t grad_shot_floor(const std::vector<std::vector<std::int64_t>>& s_grad_history,
                             int t);

struct ShotForecast {
  std::vector<std::int64_t> shots;
  bool degenerate = false;  // ||g_hat|| = 0: only the floor applies
};

/// Norm-test forecast of the next gradient shot sizes:
///   s_i = max{ ceil(S_i^2 D / (kappa^2 ||g_hat||^2)), G_grad, 2 }.
/// A zero gradient norm yields the floor alone, flagged degenerate.
ShotForecast next_grad_shots(const GradientEstimate& est, double kappa,
                             std::int64_t grad_floor);

/// Line-search query shot size: max{ mean(s_vec), ceil(||H||^2 / eps^2) }
/// (||H|| = 0 degenerates to the mean alone).
std::int64_t next_cost_shots(std::span<const std::int64_t> s_vec, double norm, double eps);

/// Mean of the last m = max(1, ceil(alpha * T)) iterates.
std::vector<double> suffix_average(const std::vector<std::vector<double>>& iterates,
                                   double alpha);

/// Algorithm: iterate { stochastic parameter-shift gradient -> 1D GP line
/// search along the descent direction -> adopt the found point -> forecast
/// next shot sizes } until cumulative shots reach the budget; return the
/// suffix average of all iterates. Identical seed and config reproduce the
/// trace bit for bit.
RunResult run_sglbo(const Cost& cost, const SglboConfig& config,
                    std::span<const double> theta0, Rng& rng);

}  // namespace sglbo
