#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sglbo/cost.hpp"
#include "sglbo/rng.hpp"
#include "sglbo/sglbo.hpp"

namespace sglbo {

/// Adam baseline. With `adaptive_shots` the fixed per-evaluation shot count
/// is replaced by the same norm-test schedule SGLBO uses (starting from
/// s_i^(0) = initial_grad_shots).
struct AdamConfig {
  double step = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t shots_per_eval = 1000;
  bool adaptive_shots = false;
  double kappa = 0.99;                  // adaptive schedule only
  std::int64_t initial_grad_shots = 2;  // adaptive schedule only
  std::int64_t total_shot_budget = 0;
  bool record_timing = false;
};

struct NftConfig {
  std::int64_t shots_per_eval = 1000;
  std::int64_t total_shot_budget = 0;
  bool record_timing = false;
};

/// Adam with bias-corrected first/second moments; gradients by the
/// stochastic parameter-shift estimator. Stops on the shot-budget rule.
RunResult run_adam(const Cost& cost, const AdamConfig& config,
                   std::span<const double> theta0, Rng& rng);

/// Sequential single-coordinate optimizer: per coordinate, estimate the cost
/// at theta_i and theta_i +- pi/2, fit the exact sinusoid
/// a + A cos(theta_i - phi) the half-angle gate structure guarantees, and
/// jump to its argmin (flat fit: keep the current value; the adopted argmin
/// representative is the one closest to the current angle so trajectories
/// stay continuous). One trace entry per coordinate update.
RunResult run_nft(const Cost& cost, const NftConfig& config,
                  std::span<const double> theta0, Rng& rng);

/// Optimizer-agnostic suffix averaging over a recorded trace.
std::vector<double> wrap_suffix_average(const RunTrace& trace, double alpha = 0.1);

}  // namespace sglbo
