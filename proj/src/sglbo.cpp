#include "sglbo/sglbo.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "sglbo/common.hpp"
#include "sglbo/errors.hpp"

namespace sglbo {

double eta_max_for(const Cost& cost, double beta) {
  if (!(beta > 0.0)) throw ArgumentError("eta_max_for: beta must be positive");
  const double norm = cost.observable_norm();
  return std::min(beta / norm, std::numbers::pi);
}

std::int64_t grad_shot_floor(const std::vector<std::vector<std::int64_t>>& s_grad_history,
                             int t) {
  if (t <= 10) return 1;
  const std::size_t window = std::min<std::size_t>(10, s_grad_history.size());
  if (window == 0) return 1;
  std::int64_t sum = 0;
  std::int64_t count = 0;
  for (std::size_t k = s_grad_history.size() - window; k < s_grad_history.size(); ++k) {
    for (std::int64_t s : s_grad_history[k]) {
      sum += s;
      ++count;
    }
  }
  return ceil_div(sum, count);
}

ShotForecast next_grad_shots(const GradientEstimate& est, double kappa,
                             std::int64_t grad_floor) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw ArgumentError("next_grad_shots: kappa outside (0,1)");
  const std::size_t d = est.g_hat.size();
  double gnorm2 = 0.0;
  for (double g : est.g_hat) gnorm2 += g * g;

  ShotForecast fc;
  fc.shots.resize(d);
  fc.degenerate = gnorm2 == 0.0;
  const std::int64_t floor_value = std::max<std::int64_t>(grad_floor, 2);
  for (std::size_t i = 0; i < d; ++i) {
    if (fc.degenerate) {
      fc.shots[i] = floor_value;
      continue;
    }
    const double s = est.emp_std[i];
    const double term = s * s * static_cast<double>(d) / (kappa * kappa * gnorm2);
    fc.shots[i] = std::max(ceil_tol(term), floor_value);
  }
  return fc;
}

std::int64_t next_cost_shots(std::span<const std::int64_t> s_vec, double norm, double eps) {
  if (!(eps > 0.0)) throw ArgumentError("next_cost_shots: eps must be positive");
  if (s_vec.empty()) throw ArgumentError("next_cost_shots: empty shot vector");
  std::int64_t sum = 0;
  for (std::int64_t s : s_vec) sum += s;
  const std::int64_t mean = ceil_div(sum, static_cast<std::int64_t>(s_vec.size()));
  if (norm == 0.0) return mean;
  return std::max(mean, ceil_tol(norm * norm / (eps * eps)));
}

std::vector<double> suffix_average(const std::vector<std::vector<double>>& iterates,
                                   double alpha) {
  if (iterates.empty()) throw ArgumentError("suffix_average: empty iterate sequence");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("suffix_average: alpha outside (0,1]");
  const std::int64_t t = static_cast<std::int64_t>(iterates.size());
  std::int64_t m = std::max<std::int64_t>(1, ceil_tol(alpha * static_cast<double>(t)));
  m = std::min(m, t);
  const std::size_t d = iterates.front().size();
  std::vector<double> avg(d, 0.0);
  for (std::size_t k = iterates.size() - static_cast<std::size_t>(m); k < iterates.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) avg[i] += iterates[k][i];
  }
  for (double& v : avg) v /= static_cast<double>(m);
  return avg;
}

RunResult run_sglbo(const Cost& cost, const SglboConfig& config,
                    std::span<const double> theta0, Rng& rng) {
  const int d = cost.dimension();
  if (static_cast<int>(theta0.size()) != d)
    throw ArgumentError("run_sglbo: theta0 length does not match the cost dimension");
  if (!(config.kappa > 0.0 && config.kappa < 1.0)) throw ConfigError("run_sglbo: kappa outside (0,1)");
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) throw ConfigError("run_sglbo: alpha outside (0,1]");
  if (!(config.beta > 0.0)) throw ConfigError("run_sglbo: beta must be positive");
  if (!(config.eps > 0.0)) throw ConfigError("run_sglbo: eps must be positive");
  if (config.initial_grad_shots < 2) throw ConfigError("run_sglbo: initial shots must be >= 2");

  const double norm = cost.observable_norm();
  const double eta_max = eta_max_for(cost, config.beta);
  const std::int64_t queries_per_bo =
      config.line_bo.init_queries + config.line_bo.refine_rounds;

  std::vector<std::int64_t> s_vec(static_cast<std::size_t>(d), config.initial_grad_shots);
  std::int64_t s_cost = next_cost_shots(s_vec, norm, config.eps);

  // The budget must admit at least one full iteration before any sampling.
  const std::int64_t first_iteration_cost =
      2 * config.initial_grad_shots * d + queries_per_bo * s_cost;
  if (config.total_shot_budget < first_iteration_cost)
    throw ConfigError("run_sglbo: shot budget below the cost of one iteration");

  RunResult result;
  RunTrace& trace = result.trace;
  std::vector<double> theta(theta0.begin(), theta0.end());
  trace.iterates.push_back(theta);

  std::int64_t cumulative = 0;
  int t = 0;
  while (cumulative < config.total_shot_budget) {
    const auto tick = std::chrono::steady_clock::now();
    const GradientEstimate est = estimate_gradient(cost, theta, s_vec, rng);
    double gnorm2 = 0.0;
    for (double g : est.g_hat) gnorm2 += g * g;

    double eta = 0.0;
    std::int64_t s_cost_used = 0;
    std::int64_t spent = est.total_shots;
    if (gnorm2 > 0.0) {
      const LineBoResult lb =
          line_bo(cost, theta, est.g_hat, eta_max, s_cost, rng, config.line_bo);
      theta = lb.next_point;
      eta = lb.eta_star;
      s_cost_used = s_cost;
      spent += lb.shots_used;
    }
    // else: degenerate zero gradient — no descent direction, stay in place.

    cumulative += spent;
    trace.iterates.push_back(theta);
    trace.cumulative_shots.push_back(cumulative);
    trace.s_grad_history.push_back(s_vec);
    trace.s_cost_history.push_back(s_cost_used);
    trace.eta_history.push_back(eta);
    if (config.record_timing) {
      const auto tock = std::chrono::steady_clock::now();
      trace.wall_ms.push_back(std::chrono::duration<double, std::milli>(tock - tick).count());
    }

    const std::int64_t floor_value = grad_shot_floor(trace.s_grad_history, t);
    s_vec = next_grad_shots(est, config.kappa, floor_value).shots;
    s_cost = next_cost_shots(s_vec, norm, config.eps);
    ++t;
  }

  result.suffix_average = suffix_average(trace.iterates, config.alpha);
  result.final_iterate = theta;
  result.total_shots = cumulative;
  result.iterations = t;
  return result;
}

}  // namespace sglbo
