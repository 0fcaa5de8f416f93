#include "sglbo/baselines.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sglbo/errors.hpp"
#include "sglbo/sglbo.hpp"
#include "test_support.hpp"

using sglbo::AdamConfig;
using sglbo::ArgumentError;
using sglbo::ConfigError;
using sglbo::NftConfig;
using sglbo::Rng;
using sglbo::RunResult;
using sglbo::ShotCounter;
using sglbo::run_adam;
using sglbo::run_nft;
using sglbo::suffix_average;
using sglbo::wrap_suffix_average;
using sglbo::testing::TrigCost;

TEST_CASE("Adam reproduces the bias-corrected update rule step by step") {
  TrigCost cost({1.3, -0.8}, {0.5, -0.2}, 0.1, 0.0, 1.0);
  ShotCounter counter;
  cost.set_shot_counter(&counter);
  AdamConfig config;
  config.step = 0.1;
  config.beta1 = 0.9;
  config.beta2 = 0.999;
  config.eps = 1e-8;
  config.shots_per_eval = 1000;
  config.total_shot_budget = 8000;  // 2 * (1000 + 1000) per iteration
  const std::vector<double> theta0{2.0, -1.2};
  Rng rng(17);
  const RunResult res = run_adam(cost, config, theta0, rng);

  CHECK(res.iterations == 2);
  REQUIRE(res.trace.iterates.size() == 3);
  CHECK(res.trace.iterates[0] == theta0);
  CHECK(res.total_shots == 8000);
  CHECK(counter.sampled == 8000);
  CHECK(res.trace.cumulative_shots == std::vector<std::int64_t>{4000, 8000});

  // Replay both updates by hand from the exact gradient (the zero-noise
  // estimator returns it up to accumulation roundoff).
  std::vector<double> theta = theta0;
  std::vector<double> m(2, 0.0), v(2, 0.0);
  for (int t = 0; t < 2; ++t) {
    const std::vector<double> g = cost.exact_gradient(theta);
    const double bc1 = 1.0 - std::pow(config.beta1, t + 1);
    const double bc2 = 1.0 - std::pow(config.beta2, t + 1);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      theta[i] -= config.step * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + config.eps);
    }
    for (std::size_t i = 0; i < theta.size(); ++i)
      CHECK(std::abs(res.trace.iterates[t + 1][i] - theta[i]) < 1e-12);
  }

  for (const auto& s : res.trace.s_grad_history)
    CHECK(s == std::vector<std::int64_t>{1000, 1000});
  CHECK(res.trace.s_cost_history == std::vector<std::int64_t>{0, 0});
  CHECK(res.trace.eta_history == std::vector<double>{0.0, 0.0});
  CHECK(res.trace.wall_ms.empty());
  CHECK(res.final_iterate == res.trace.iterates.back());
  CHECK(res.suffix_average == suffix_average(res.trace.iterates, 0.1));
}

TEST_CASE("Adam with adaptive shots keeps the floor on a noise-free cost") {
  TrigCost cost({1.0, 0.7}, {0.0, 0.3}, 0.0, 0.0, 1.0);
  AdamConfig config;
  config.adaptive_shots = true;
  config.initial_grad_shots = 2;
  config.total_shot_budget = 80;  // 2 * (2 + 2) = 8 shots per iteration
  Rng rng(23);
  const RunResult res = run_adam(cost, config, std::vector<double>{1.0, -0.5}, rng);

  CHECK(res.iterations == 10);
  CHECK(res.total_shots == 80);
  for (const auto& s : res.trace.s_grad_history)
    CHECK(s == std::vector<std::int64_t>{2, 2});
}

TEST_CASE("Adam with adaptive shots grows the sample size under noise") {
  TrigCost cost({1.0, 0.7}, {0.0, 0.3}, 0.0, 0.5, 1.0);
  ShotCounter counter;
  cost.set_shot_counter(&counter);
  AdamConfig config;
  config.adaptive_shots = true;
  config.initial_grad_shots = 2;
  config.total_shot_budget = 2000;
  Rng rng(29);
  const RunResult res = run_adam(cost, config, std::vector<double>{1.0, -0.5}, rng);

  CHECK(res.trace.s_grad_history[0] == std::vector<std::int64_t>{2, 2});
  bool grew = false;
  std::int64_t prev = 0;
  for (std::size_t k = 0; k < res.trace.s_grad_history.size(); ++k) {
    std::int64_t total = 0;
    for (auto s : res.trace.s_grad_history[k]) {
      CHECK(s >= 2);
      total += 2 * s;
    }
    if (res.trace.s_grad_history[k] != res.trace.s_grad_history[0]) grew = true;
    CHECK(res.trace.cumulative_shots[k] - prev == total);
    prev = res.trace.cumulative_shots[k];
  }
  CHECK(grew);
  CHECK(res.total_shots >= config.total_shot_budget);
  CHECK(res.trace.cumulative_shots[res.trace.cumulative_shots.size() - 2] <
        config.total_shot_budget);
  CHECK(counter.sampled == res.total_shots);

  Rng rng2(29);
  TrigCost cost2({1.0, 0.7}, {0.0, 0.3}, 0.0, 0.5, 1.0);
  const RunResult res2 = run_adam(cost2, config, std::vector<double>{1.0, -0.5}, rng2);
  CHECK(res2.trace.iterates == res.trace.iterates);
  CHECK(res2.trace.s_grad_history == res.trace.s_grad_history);
}

TEST_CASE("sequential sinusoid fits land each coordinate on its argmin") {
  constexpr double pi = std::numbers::pi;
  TrigCost cost({1.2, 0.8}, {0.7, -0.5}, 0.3, 0.0, 1.0);
  ShotCounter counter;
  cost.set_shot_counter(&counter);
  NftConfig config;
  config.shots_per_eval = 1000;
  config.total_shot_budget = 6000;  // two coordinate updates at 3000 each
  const std::vector<double> theta0{0.0, 0.3};
  Rng rng(31);
  const RunResult res = run_nft(cost, config, theta0, rng);

  CHECK(res.iterations == 2);
  REQUIRE(res.trace.iterates.size() == 3);
  // Coordinate 0 jumps to the argmin representative nearest 0: 0.7 - pi.
  CHECK(std::abs(res.trace.iterates[1][0] - (0.7 - pi)) < 1e-12);
  CHECK(res.trace.iterates[1][1] == 0.3);  // untouched coordinate is bit-exact
  // Coordinate 1 then jumps to -0.5 + pi (already the nearest representative).
  CHECK(res.trace.iterates[2][0] == res.trace.iterates[1][0]);
  CHECK(std::abs(res.trace.iterates[2][1] - (pi - 0.5)) < 1e-12);
  // Both cosines sit exactly at -1, so the final value hits the global
  // minimum offset - sum |amplitudes| without residue.
  CHECK(cost.exact_value(res.final_iterate) == -1.7);
  CHECK(cost.exact_value(res.final_iterate) == cost.minimum_value());

  CHECK(res.total_shots == 6000);
  CHECK(counter.sampled == 6000);
  CHECK(res.trace.cumulative_shots == std::vector<std::int64_t>{3000, 6000});
  CHECK(res.trace.s_cost_history == std::vector<std::int64_t>{1000, 1000});
  for (const auto& s : res.trace.s_grad_history) CHECK(s.empty());
  CHECK(res.trace.eta_history == std::vector<double>{0.0, 0.0});
  CHECK(res.suffix_average == suffix_average(res.trace.iterates, 0.1));
}

TEST_CASE("a coordinate with zero amplitude never moves") {
  TrigCost cost({0.0, 1.0}, {0.0, 0.0}, 0.0, 0.0, 1.0);
  NftConfig config;
  config.shots_per_eval = 500;
  config.total_shot_budget = 1500;  // exactly one coordinate update
  Rng rng(37);
  const RunResult res = run_nft(cost, config, std::vector<double>{0.4, 2.0}, rng);
  CHECK(res.iterations == 1);
  CHECK(res.trace.iterates[1] == res.trace.iterates[0]);
}

TEST_CASE("coordinate descent under sampling noise replays deterministically") {
  TrigCost cost({1.0, -0.6, 0.4}, {0.1, 0.9, -1.1}, 0.0, 0.3, 1.0);
  NftConfig config;
  config.shots_per_eval = 200;
  config.total_shot_budget = 4000;
  Rng rng(41);
  const RunResult res = run_nft(cost, config, std::vector<double>{1.0, 2.0, -1.0}, rng);
  CHECK(res.total_shots >= config.total_shot_budget);
  CHECK(res.trace.cumulative_shots[res.trace.cumulative_shots.size() - 2] <
        config.total_shot_budget);

  Rng rng2(41);
  TrigCost cost2({1.0, -0.6, 0.4}, {0.1, 0.9, -1.1}, 0.0, 0.3, 1.0);
  const RunResult res2 = run_nft(cost2, config, std::vector<double>{1.0, 2.0, -1.0}, rng2);
  CHECK(res2.trace.iterates == res.trace.iterates);
  CHECK(res2.trace.cumulative_shots == res.trace.cumulative_shots);
}

TEST_CASE("baseline timing columns are opt-in") {
  TrigCost cost({1.0}, {0.0}, 0.0, 0.1, 1.0);
  AdamConfig adam;
  adam.shots_per_eval = 100;
  adam.total_shot_budget = 600;
  adam.record_timing = true;
  Rng rng(43);
  const RunResult ra = run_adam(cost, adam, std::vector<double>{1.0}, rng);
  CHECK(ra.trace.wall_ms.size() == static_cast<std::size_t>(ra.iterations));

  NftConfig nft;
  nft.shots_per_eval = 100;
  nft.total_shot_budget = 600;
  const RunResult rn = run_nft(cost, nft, std::vector<double>{1.0}, rng);
  CHECK(rn.trace.wall_ms.empty());
}

TEST_CASE("suffix averaging over a recorded trace matches the free function") {
  TrigCost cost({1.0, 0.5}, {0.2, -0.4}, 0.0, 0.2, 1.0);
  AdamConfig config;
  config.shots_per_eval = 100;
  config.total_shot_budget = 4000;
  Rng rng(47);
  const RunResult res = run_adam(cost, config, std::vector<double>{1.5, -0.5}, rng);
  CHECK(wrap_suffix_average(res.trace, 0.5) ==
        suffix_average(res.trace.iterates, 0.5));
  CHECK(wrap_suffix_average(res.trace) == res.suffix_average);
}

TEST_CASE("baseline configuration validation") {
  TrigCost cost({1.0, 0.5}, {0.0, 0.0}, 0.0, 0.1, 1.0);
  Rng rng(53);
  const std::vector<double> theta0{0.0, 0.0};

  AdamConfig adam;
  adam.total_shot_budget = 8000;
  CHECK_THROWS_AS(run_adam(cost, adam, std::vector<double>{0.0}, rng), ArgumentError);
  {
    AdamConfig bad = adam;
    bad.step = 0.0;
    CHECK_THROWS_AS(run_adam(cost, bad, theta0, rng), ConfigError);
  }
  {
    AdamConfig bad = adam;
    bad.beta1 = 1.0;
    CHECK_THROWS_AS(run_adam(cost, bad, theta0, rng), ConfigError);
  }
  {
    AdamConfig bad = adam;
    bad.beta2 = 1.0;
    CHECK_THROWS_AS(run_adam(cost, bad, theta0, rng), ConfigError);
  }
  {
    AdamConfig bad = adam;
    bad.shots_per_eval = 1;
    CHECK_THROWS_AS(run_adam(cost, bad, theta0, rng), ConfigError);
  }
  {
    AdamConfig bad = adam;
    bad.adaptive_shots = true;
    bad.initial_grad_shots = 1;
    CHECK_THROWS_AS(run_adam(cost, bad, theta0, rng), ConfigError);
  }
  {
    AdamConfig bad = adam;
    bad.total_shot_budget = 3999;  // one iteration costs 2 * (1000 + 1000)
    CHECK_THROWS_AS(run_adam(cost, bad, theta0, rng), ConfigError);
  }

  NftConfig nft;
  nft.total_shot_budget = 6000;
  CHECK_THROWS_AS(run_nft(cost, nft, std::vector<double>{0.0}, rng), ArgumentError);
  {
    NftConfig bad = nft;
    bad.shots_per_eval = 0;
    CHECK_THROWS_AS(run_nft(cost, bad, theta0, rng), ConfigError);
  }
  {
    NftConfig bad = nft;
    bad.total_shot_budget = 2999;  // one coordinate update costs 3 * 1000
    CHECK_THROWS_AS(run_nft(cost, bad, theta0, rng), ConfigError);
  }
}
