#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sglbo/cost.hpp"
#include "sglbo/rng.hpp"

namespace sglbo {

struct GradientEstimate {
  std::vector<double> g_hat;          // component means
  std::vector<double> emp_std;        // sample standard deviations S_i
  std::vector<std::int64_t> shots;    // s_i actually used per component
  std::int64_t total_shots = 0;       // == 2 * sum_i s_i
};

/// Exact gradient by the parameter-shift rule,
///   df/dtheta_i = [f(theta + pi/2 e_i) - f(theta - pi/2 e_i)] / 2,
/// which is exact for circuits built from half-angle Pauli rotations (noise
/// channels are theta-independent, so it also holds for noisy costs).
/// Evaluated with the cost's exact (noise-aware) expectation.
std::vector<double> exact_gradient(const Cost& cost, std::span<const double> theta);

/// Stochastic parameter-shift gradient: component i draws s_i paired
/// single-shot estimates at theta +- pi/2 e_i from independent executions and
/// averages g^(m) = (O_+^(m) - O_-^(m)) / 2. Each component consumes its own
/// substream (derived from one word of `rng`), so results do not depend on
/// evaluation order. Requires s_i >= 2 so that S_i is defined.
GradientEstimate estimate_gradient(const Cost& cost, std::span<const double> theta,
                                   std::span<const std::int64_t> shots_per_component, Rng& rng);

}  // namespace sglbo
