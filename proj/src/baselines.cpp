#include "sglbo/baselines.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "sglbo/common.hpp"
#include "sglbo/errors.hpp"
#include "sglbo/gradient.hpp"

namespace sglbo {

RunResult run_adam(const Cost& cost, const AdamConfig& config,
                   std::span<const double> theta0, Rng& rng) {
  const int d = cost.dimension();
  if (static_cast<int>(theta0.size()) != d)
    throw ArgumentError("run_adam: theta0 length does not match the cost dimension");
  if (!(config.step > 0.0)) throw ConfigError("run_adam: step size must be positive");
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0) || !(config.beta2 >= 0.0 && config.beta2 < 1.0))
    throw ConfigError("run_adam: moment decays outside [0,1)");
  if (config.shots_per_eval < 2) throw ConfigError("run_adam: need >= 2 shots per evaluation");
  if (config.adaptive_shots && config.initial_grad_shots < 2)
    throw ConfigError("run_adam: initial shots must be >= 2");

  std::vector<std::int64_t> s_vec(
      static_cast<std::size_t>(d),
      config.adaptive_shots ? config.initial_grad_shots : config.shots_per_eval);
  std::int64_t first_iteration_cost = 0;
  for (std::int64_t s : s_vec) first_iteration_cost += 2 * s;
  if (config.total_shot_budget < first_iteration_cost)
    throw ConfigError("run_adam: shot budget below the cost of one gradient evaluation");

  RunResult result;
  RunTrace& trace = result.trace;
  std::vector<double> theta(theta0.begin(), theta0.end());
  trace.iterates.push_back(theta);

  std::vector<double> m(static_cast<std::size_t>(d), 0.0);
  std::vector<double> v(static_cast<std::size_t>(d), 0.0);
  std::int64_t cumulative = 0;
  int t = 0;
  while (cumulative < config.total_shot_budget) {
    const auto tick = std::chrono::steady_clock::now();
    const GradientEstimate est = estimate_gradient(cost, theta, s_vec, rng);
    const double bc1 = 1.0 - std::pow(config.beta1, t + 1);
    const double bc2 = 1.0 - std::pow(config.beta2, t + 1);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double g = est.g_hat[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g;
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      theta[i] -= config.step * mhat / (std::sqrt(vhat) + config.eps);
    }
    cumulative += est.total_shots;
    trace.iterates.push_back(theta);
    trace.cumulative_shots.push_back(cumulative);
    trace.s_grad_history.push_back(s_vec);
    trace.s_cost_history.push_back(0);  // Adam runs no line search
    trace.eta_history.push_back(0.0);
    if (config.record_timing) {
      const auto tock = std::chrono::steady_clock::now();
      trace.wall_ms.push_back(std::chrono::duration<double, std::milli>(tock - tick).count());
    }
    if (config.adaptive_shots) {
      const std::int64_t floor_value = grad_shot_floor(trace.s_grad_history, t);
      s_vec = next_grad_shots(est, config.kappa, floor_value).shots;
    }
    ++t;
  }

  result.suffix_average = suffix_average(trace.iterates, 0.1);
  result.final_iterate = theta;
  result.total_shots = cumulative;
  result.iterations = t;
  return result;
}

RunResult run_nft(const Cost& cost, const NftConfig& config,
                  std::span<const double> theta0, Rng& rng) {
  const int d = cost.dimension();
  if (static_cast<int>(theta0.size()) != d)
    throw ArgumentError("run_nft: theta0 length does not match the cost dimension");
  if (config.shots_per_eval < 1) throw ConfigError("run_nft: need >= 1 shot per evaluation");
  if (config.total_shot_budget < 3 * config.shots_per_eval)
    throw ConfigError("run_nft: shot budget below the cost of one coordinate update");

  RunResult result;
  RunTrace& trace = result.trace;
  std::vector<double> theta(theta0.begin(), theta0.end());
  trace.iterates.push_back(theta);

  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> probe(theta);
  std::int64_t cumulative = 0;
  int t = 0;
  while (cumulative < config.total_shot_budget) {
    const auto tick = std::chrono::steady_clock::now();
    const std::size_t i = static_cast<std::size_t>(t % d);
    std::copy(theta.begin(), theta.end(), probe.begin());

    const double y0 = cost.noisy_query(probe, config.shots_per_eval, rng).value;
    probe[i] = theta[i] + half_pi;
    const double yp = cost.noisy_query(probe, config.shots_per_eval, rng).value;
    probe[i] = theta[i] - half_pi;
    const double ym = cost.noisy_query(probe, config.shots_per_eval, rng).value;
    cumulative += 3 * config.shots_per_eval;

    // Restricted to one coordinate the cost is a + A cos(x - phi):
    //   A cos(theta_i - phi) = y0 - a,  A sin(theta_i - phi) = (ym - yp)/2.
    const double a = 0.5 * (yp + ym);
    const double bcos = y0 - a;
    const double bsin = 0.5 * (ym - yp);
    if (bcos != 0.0 || bsin != 0.0) {
      const double phi = theta[i] - std::atan2(bsin, bcos);
      // Argmin phi + pi, shifted by 2 pi k to the representative nearest the
      // current angle (any representative is optimal; this keeps the iterate
      // trajectory continuous for suffix averaging).
      theta[i] += std::remainder(phi + std::numbers::pi - theta[i], two_pi);
    }
    // Flat fit (A = 0): the coordinate does not move.

    trace.iterates.push_back(theta);
    trace.cumulative_shots.push_back(cumulative);
    trace.s_grad_history.push_back({});
    trace.s_cost_history.push_back(config.shots_per_eval);
    trace.eta_history.push_back(0.0);
    if (config.record_timing) {
      const auto tock = std::chrono::steady_clock::now();
      trace.wall_ms.push_back(std::chrono::duration<double, std::milli>(tock - tick).count());
    }
    ++t;
  }

  result.suffix_average = suffix_average(trace.iterates, 0.1);
  result.final_iterate = theta;
  result.total_shots = cumulative;
  result.iterations = t;
  return result;
}

std::vector<double> wrap_suffix_average(const RunTrace& trace, double alpha) {
  return suffix_average(trace.iterates, alpha);
}

}  // namespace sglbo
