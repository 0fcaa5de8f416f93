#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sglbo/cost.hpp"
#include "sglbo/rng.hpp"
#include "sglbo/statevector.hpp"
#include "test_support.hpp"

using namespace sglbo;
using sglbo::testing::dense_sum_oracle;
using sglbo::testing::random_angles;

namespace {

NoiseModel mild_model(int n) {
  NoiseModel model;
  model.single_qubit_rate.assign(static_cast<std::size_t>(n), 2e-3);
  model.readout_error.assign(static_cast<std::size_t>(n), 1.5e-2);
  for (int q = 0; q + 1 < n; ++q) model.cnot_rates.push_back({{q, q + 1}, 8e-3});
  return model;
}

}  // namespace

TEST_CASE("energy cost: exact value equals the dense quadratic form") {
  Rng rng(900);
  const VqeCost cost(tfim_hamiltonian(3, 1.0, 1.5), build_ansatz(3, 2));
  CHECK(cost.dimension() == 18);
  CHECK(cost.num_qubits() == 3);
  const std::vector<double> theta = random_angles(rng, cost.dimension());
  const StateVector psi = simulate_state(cost.ansatz(), theta);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.amps.size()));
  for (std::size_t i = 0; i < psi.amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = psi.amps[i];
  const double want = (v.adjoint() * dense_sum_oracle(cost.hamiltonian()) * v)(0, 0).real();
  CHECK(cost.exact_value(theta) == doctest::Approx(want).epsilon(1e-10));
  CHECK(cost.exact_value_noiseless(theta) == cost.exact_value(theta));
}

TEST_CASE("energy cost: single-term estimates collapse to the exact value") {
  // H = 2.5 * Z on qubit 0 with theta = 0 keeps |00>: every importance-weighted
  // single-shot estimate is sign(c) * L1 * (+1) = 2.5, with zero variance.
  PauliSum ham(2);
  ham.add(2.5, PauliString::from_label("ZI"));
  VqeCost cost(std::move(ham), build_ansatz(2, 0));
  const std::vector<double> theta(4, 0.0);
  Rng rng(901);
  ShotCounter counter;
  cost.set_shot_counter(&counter);
  const auto estimates = cost.single_shot_estimates(theta, 64, rng);
  REQUIRE(estimates.size() == 64);
  for (double e : estimates) CHECK(e == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(counter.sampled == 64);
  const CostQuery q = cost.noisy_query(theta, 32, rng);
  CHECK(q.value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(q.shots_used == 32);
  CHECK(counter.sampled == 96);
}

TEST_CASE("energy cost: sampling estimators are unbiased") {
  Rng rng(902);
  const VqeCost cost(tfim_hamiltonian(2, 1.0, 1.5), build_ansatz(2, 1));
  const std::vector<double> theta = random_angles(rng, cost.dimension());
  const double exact = cost.exact_value(theta);
  const double l1 = cost.hamiltonian().weight_l1();

  double query_mean = 0.0;
  const int reps = 300;
  for (int i = 0; i < reps; ++i) query_mean += cost.noisy_query(theta, 400, rng).value;
  query_mean /= reps;
  // Standard error of the grand mean is below l1 / sqrt(reps * 400).
  CHECK(std::abs(query_mean - exact) < 5.0 * l1 / std::sqrt(400.0 * reps));

  const auto singles = cost.single_shot_estimates(theta, 120000, rng);
  double singles_mean = 0.0;
  for (double e : singles) {
    CHECK(std::abs(std::abs(e) - l1) < 1e-9);  // each estimate is +-L1
    singles_mean += e;
  }
  singles_mean /= static_cast<double>(singles.size());
  CHECK(std::abs(singles_mean - exact) < 5.0 * l1 / std::sqrt(120000.0));
}

TEST_CASE("energy cost: noisy model changes the executed expectation only") {
  Rng rng(903);
  const auto model = mild_model(3);
  const VqeCost noisy(tfim_hamiltonian(3, 1.0, 1.5), build_ansatz(3, 1), model);
  const VqeCost ideal(tfim_hamiltonian(3, 1.0, 1.5), build_ansatz(3, 1));
  const std::vector<double> theta = random_angles(rng, noisy.dimension());
  CHECK(noisy.exact_value_noiseless(theta) == doctest::Approx(ideal.exact_value(theta)));
  CHECK(noisy.exact_value(theta) != doctest::Approx(ideal.exact_value(theta)).epsilon(1e-12));
  CHECK(noisy.observable_norm() == ideal.observable_norm());
}

TEST_CASE("overlap cost: the prepared target is recovered exactly at theta*") {
  const ParamCircuit ansatz = build_ansatz(4, 6);
  const std::vector<double> star(static_cast<std::size_t>(ansatz.num_params), 0.0);
  const VqcCost cost(ansatz, star);
  CHECK(cost.observable_norm() == 1.0);
  CHECK(cost.exact_value(star) == 0.0);
  Rng rng(904);
  const CostQuery q = cost.noisy_query(star, 1000, rng);
  CHECK(q.value == 0.0);
}

TEST_CASE("overlap cost: a pi rotation on one qubit misses by exactly 1/n") {
  // theta* = 0; theta rotates qubit 0 by pi (RX), so qubit 0 returns |1>
  // with certainty and the others return |0>: f = 1/n.
  const ParamCircuit ansatz = build_ansatz(2, 0);
  const std::vector<double> star(4, 0.0);
  const VqcCost cost(ansatz, star);
  std::vector<double> theta(4, 0.0);
  theta[0] = std::numbers::pi;
  CHECK(cost.exact_value(theta) == doctest::Approx(0.5).epsilon(1e-12));
  Rng rng(905);
  const CostQuery q = cost.noisy_query(theta, 500, rng);
  CHECK(q.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("overlap cost on a hand-built single-qubit circuit") {
  ParamCircuit c;
  c.num_qubits = 1;
  c.num_params = 1;
  c.gates.push_back(Gate{GateKind::Rx, 0, -1, 0, 1.0});
  const VqcCost cost(c, {0.0});
  CHECK(cost.exact_value(std::vector<double>{std::numbers::pi}) == doctest::Approx(1.0));
  CHECK(cost.exact_value(std::vector<double>{std::numbers::pi / 2}) == doctest::Approx(0.5));
  CHECK(cost.exact_value(std::vector<double>{0.0}) == 0.0);
}

TEST_CASE("overlap cost: sampling is unbiased and audited") {
  Rng rng(906);
  const ParamCircuit ansatz = build_ansatz(2, 1);
  const std::vector<double> star(static_cast<std::size_t>(ansatz.num_params), 0.0);
  VqcCost cost(ansatz, star);
  ShotCounter counter;
  cost.set_shot_counter(&counter);
  const std::vector<double> theta = random_angles(rng, cost.dimension());
  const double exact = cost.exact_value(theta);
  const auto singles = cost.single_shot_estimates(theta, 150000, rng);
  CHECK(counter.sampled == 150000);
  double mean = 0.0;
  for (double e : singles) mean += e;
  mean /= static_cast<double>(singles.size());
  CHECK(std::abs(mean - exact) < 5.0 / std::sqrt(150000.0));
}

TEST_CASE("overlap cost: noise keeps the ideal trace metric clean") {
  const ParamCircuit ansatz = build_ansatz(2, 1);
  const std::vector<double> star(static_cast<std::size_t>(ansatz.num_params), 0.0);
  const VqcCost noisy(ansatz, star, mild_model(2));
  CHECK(noisy.exact_value_noiseless(star) == 0.0);
  // The noisy executed value at theta* is strictly positive.
  CHECK(noisy.exact_value(star) > 1e-4);
  CHECK(noisy.exact_value(star) < 0.2);
  Rng rng(907);
  double mean = 0.0;
  const int reps = 200;
  for (int i = 0; i < reps; ++i) mean += noisy.noisy_query(star, 200, rng).value;
  mean /= reps;
  CHECK(std::abs(mean - noisy.exact_value(star)) < 5.0 / std::sqrt(200.0 * reps));
}
