#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sglbo/density.hpp"
#include "sglbo/rng.hpp"
#include "sglbo/statevector.hpp"
#include "test_support.hpp"

using namespace sglbo;
using sglbo::testing::dense_sum_oracle;
using sglbo::testing::random_angles;

namespace {

NoiseModel uniform_model(int n, double single, double cnot, double readout) {
  NoiseModel model;
  model.single_qubit_rate.assign(static_cast<std::size_t>(n), single);
  model.readout_error.assign(static_cast<std::size_t>(n), readout);
  for (int q = 0; q + 1 < n; ++q)
    model.cnot_rates.push_back({{q, q + 1}, cnot});
  return model;
}

PauliSum single_z(int n, int qubit) {
  PauliSum sum(n);
  sum.add(1.0, PauliString::single(n, qubit, PauliOp::Z));
  return sum;
}

}  // namespace

TEST_CASE("noiseless density evolution matches the pure-state simulator") {
  Rng rng(111);
  const ParamCircuit c = build_ansatz(3, 2);
  const std::vector<double> theta = random_angles(rng, c.num_params);
  const DensityMatrix rho = simulate_density(c, theta, nullptr);
  const StateVector psi = simulate_state(c, theta);
  CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
  for (Eigen::Index a = 0; a < rho.rho.rows(); ++a)
    for (Eigen::Index b = 0; b < rho.rho.cols(); ++b) {
      const auto want = psi.amps[static_cast<std::size_t>(a)] *
                        std::conj(psi.amps[static_cast<std::size_t>(b)]);
      CHECK(std::abs(rho.rho(a, b) - want) < 1e-12);
    }
  const PauliSum ham = tfim_hamiltonian(3, 1.0, 1.5);
  CHECK(expectation(rho, ham) == doctest::Approx(exact_expectation(psi, ham)).epsilon(1e-10));
}

TEST_CASE("depolarizing shrinks <Z> by exactly 1-p") {
  for (double p : {0.0, 0.3, 1.0}) {
    DensityMatrix rho = DensityMatrix::zero_state(2);
    apply_depolarizing(rho, 0, p);
    CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expectation(rho, single_z(2, 0)) == doctest::Approx(1.0 - p).epsilon(1e-12));
    CHECK(expectation(rho, single_z(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("joint pair depolarizing mixes both qubits") {
  DensityMatrix rho = DensityMatrix::zero_state(2);
  apply_depolarizing_pair(rho, 0, 1, 1.0);
  CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(expectation(rho, single_z(2, 0))) < 1e-12);
  PauliSum zz(2);
  zz.add(1.0, PauliString::from_label("ZZ"));
  CHECK(std::abs(expectation(rho, zz)) < 1e-12);
  // Partial mixing interpolates linearly.
  DensityMatrix half = DensityMatrix::zero_state(2);
  apply_depolarizing_pair(half, 0, 1, 0.4);
  CHECK(expectation(half, zz) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("gate noise: RX depolarizes, RZ is free, CNOT uses the pair rate") {
  const NoiseModel model = uniform_model(2, 0.1, 0.2, 0.0);
  std::vector<double> theta{0.0};

  DensityMatrix rho = DensityMatrix::zero_state(2);
  apply_gate_noise(rho, Gate{GateKind::Rx, 0, -1, 0, 1.0}, model);
  CHECK(expectation(rho, single_z(2, 0)) == doctest::Approx(0.9).epsilon(1e-12));

  DensityMatrix rz = DensityMatrix::zero_state(2);
  apply_gate_noise(rz, Gate{GateKind::Rz, 1, -1, 0, 1.0}, model);
  CHECK(expectation(rz, single_z(2, 1)) == doctest::Approx(1.0).epsilon(1e-12));

  DensityMatrix cx = DensityMatrix::zero_state(2);
  apply_gate_noise(cx, Gate{GateKind::Cnot, 1, 0, -1, 1.0}, model);
  CHECK(expectation(cx, single_z(2, 0)) == doctest::Approx(0.8).epsilon(1e-12));

  // Device qubits outside the table are rejected.
  DensityMatrix wide = DensityMatrix::zero_state(3);
  CHECK_THROWS_AS(apply_gate_noise(wide, Gate{GateKind::Rx, 2, -1, 0, 1.0},
                                   uniform_model(2, 0.1, 0.2, 0.0)),
                  TopologyError);
}

TEST_CASE("simulate_density guards the qubit count") {
  const ParamCircuit c = build_ansatz(7, 0);
  const std::vector<double> theta(static_cast<std::size_t>(c.num_params), 0.0);
  CHECK_THROWS_AS((void)simulate_density(c, theta, nullptr), ResourceError);
}

TEST_CASE("density expectation matches the dense trace oracle") {
  Rng rng(222);
  const ParamCircuit c = build_ansatz(3, 1);
  const std::vector<double> theta = random_angles(rng, c.num_params);
  const NoiseModel model = uniform_model(3, 0.05, 0.1, 0.0);
  const DensityMatrix rho = simulate_density(c, theta, &model);
  CHECK(rho.trace_real() == doctest::Approx(1.0).epsilon(1e-10));
  const PauliSum ham = tfim_hamiltonian(3, 1.0, 1.5);
  const auto want = (dense_sum_oracle(ham) * rho.rho).trace().real();
  CHECK(expectation(rho, ham) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("readout flips match the calibrated rate") {
  const DensityMatrix rho = DensityMatrix::zero_state(1);
  const NoiseModel model = uniform_model(1, 0.0, 0.0, 0.1044);
  Rng rng(333);
  ShotCounter counter;
  const auto draws = sample_with_readout(rho, &model, 100000, rng, &counter);
  CHECK(counter.sampled == 100000);
  double ones = 0.0;
  for (auto idx : draws) ones += static_cast<double>(idx & 1);
  CHECK(std::abs(ones / 100000.0 - 0.1044) < 0.01);
}

TEST_CASE("zero readout error reads a basis state exactly") {
  const DensityMatrix rho = DensityMatrix::zero_state(4);
  const NoiseModel model = uniform_model(4, 0.0, 0.0, 0.0);
  Rng rng(444);
  for (auto idx : sample_with_readout(rho, &model, 200, rng)) CHECK(idx == 0);
  Rng rng2(445);
  for (auto idx : sample_with_readout(rho, nullptr, 200, rng2)) CHECK(idx == 0);
}

TEST_CASE("a maximally mixed qubit reads 1 half the time under any readout error") {
  DensityMatrix rho = DensityMatrix::zero_state(1);
  apply_depolarizing(rho, 0, 1.0);
  const NoiseModel model = uniform_model(1, 0.0, 0.0, 0.37);
  Rng rng(555);
  double ones = 0.0;
  for (auto idx : sample_with_readout(rho, &model, 100000, rng)) ones += static_cast<double>(idx & 1);
  CHECK(ones / 100000.0 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("pauli sampling with readout only flips measured qubits") {
  // |0> with readout error 1 on the unmeasured qubit: outcome unaffected.
  const DensityMatrix rho = DensityMatrix::zero_state(2);
  NoiseModel model = uniform_model(2, 0.0, 0.0, 0.0);
  model.readout_error[1] = 1.0;
  Rng rng(666);
  ShotCounter counter;
  for (int o : sample_pauli_with_readout(rho, PauliString::from_label("ZI"), &model, 100, rng,
                                         &counter))
    CHECK(o == 1);
  CHECK(counter.sampled == 100);
  // Measuring the certain-flip qubit inverts every outcome.
  for (int o : sample_pauli_with_readout(rho, PauliString::from_label("IZ"), &model, 100, rng))
    CHECK(o == -1);
  // The identity string never samples.
  for (int o : sample_pauli_with_readout(rho, PauliString::identity(2), &model, 7, rng))
    CHECK(o == 1);
}
