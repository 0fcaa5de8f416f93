#include "sglbo/gradient.hpp"

#include <cmath>
#include <numbers>

#include "sglbo/errors.hpp"

namespace sglbo {

std::vector<double> exact_gradient(const Cost& cost, std::span<const double> theta) {
  const int d = cost.dimension();
  if (static_cast<int>(theta.size()) != d)
    throw ArgumentError("exact_gradient: parameter vector has wrong length");
  std::vector<double> grad(static_cast<std::size_t>(d));
  std::vector<double> shifted(theta.begin(), theta.end());
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int i = 0; i < d; ++i) {
    const double orig = shifted[static_cast<std::size_t>(i)];
    shifted[static_cast<std::size_t>(i)] = orig + half_pi;
    const double plus = cost.exact_value(shifted);
    shifted[static_cast<std::size_t>(i)] = orig - half_pi;
    const double minus = cost.exact_value(shifted);
    shifted[static_cast<std::size_t>(i)] = orig;
    grad[static_cast<std::size_t>(i)] = 0.5 * (plus - minus);
  }
  return grad;
}

GradientEstimate estimate_gradient(const Cost& cost, std::span<const double> theta,
                                   std::span<const std::int64_t> shots_per_component, Rng& rng) {
  const int d = cost.dimension();
  if (static_cast<int>(theta.size()) != d)
    throw ArgumentError("estimate_gradient: parameter vector has wrong length");
  if (static_cast<int>(shots_per_component.size()) != d)
    throw ArgumentError("estimate_gradient: shot vector has wrong length");
  for (std::int64_t s : shots_per_component) {
    if (s < 2) throw ArgumentError("estimate_gradient: need s_i >= 2 per component");
  }

  GradientEstimate est;
  est.g_hat.resize(static_cast<std::size_t>(d));
  est.emp_std.resize(static_cast<std::size_t>(d));
  est.shots.assign(shots_per_component.begin(), shots_per_component.end());

  // One base word, one derived substream per component: the estimate for
  // component i is reproducible regardless of how others are evaluated.
  const std::uint64_t base = rng.next_u64();
  std::vector<double> shifted(theta.begin(), theta.end());
  constexpr double half_pi = std::numbers::pi / 2.0;
  for (int i = 0; i < d; ++i) {
    Rng sub(mix_seed(base, static_cast<std::uint64_t>(i)));
    const std::int64_t si = shots_per_component[static_cast<std::size_t>(i)];
    const double orig = shifted[static_cast<std::size_t>(i)];
    shifted[static_cast<std::size_t>(i)] = orig + half_pi;
    const std::vector<double> plus = cost.single_shot_estimates(shifted, si, sub);
    shifted[static_cast<std::size_t>(i)] = orig - half_pi;
    const std::vector<double> minus = cost.single_shot_estimates(shifted, si, sub);
    shifted[static_cast<std::size_t>(i)] = orig;

    double mean = 0.0;
    for (std::int64_t m = 0; m < si; ++m)
      mean += 0.5 * (plus[static_cast<std::size_t>(m)] - minus[static_cast<std::size_t>(m)]);
    mean /= static_cast<double>(si);
    double var = 0.0;
    for (std::int64_t m = 0; m < si; ++m) {
      const double g = 0.5 * (plus[static_cast<std::size_t>(m)] - minus[static_cast<std::size_t>(m)]);
      var += (g - mean) * (g - mean);
    }
    var /= static_cast<double>(si - 1);
    est.g_hat[static_cast<std::size_t>(i)] = mean;
    est.emp_std[static_cast<std::size_t>(i)] = std::sqrt(var);
    est.total_shots += 2 * si;
  }
  return est;
}

}  // namespace sglbo
