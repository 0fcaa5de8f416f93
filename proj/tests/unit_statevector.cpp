#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "sglbo/circuit.hpp"
#include "sglbo/rng.hpp"
#include "sglbo/statevector.hpp"
#include "test_support.hpp"

using namespace sglbo;
using sglbo::testing::dense_sum_oracle;
using sglbo::testing::random_angles;

namespace {

Eigen::VectorXcd as_vector(const StateVector& s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.amps.size()));
  for (std::size_t i = 0; i < s.amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = s.amps[i];
  return v;
}

/// Dense single-gate oracle on the full 2^n space, built by Kronecker
/// products independent of the simulator's bit tricks.
Eigen::MatrixXcd dense_gate_oracle(int n, const Gate& g, std::span<const double> theta) {
  using namespace std::complex_literals;
  const auto eye = [](int k) {
    return Eigen::MatrixXcd::Identity(1 << k, 1 << k);
  };
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  if (g.kind == GateKind::Cnot) {
    // P0 (x) I + P1 (x) X spread over the control/target positions.
    Eigen::MatrixXcd acc0 = Eigen::MatrixXcd::Identity(1, 1);
    Eigen::MatrixXcd acc1 = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      Eigen::Matrix2cd f0 = Eigen::Matrix2cd::Identity();
      Eigen::Matrix2cd f1 = Eigen::Matrix2cd::Identity();
      if (q == g.control) {
        f0 << 1, 0, 0, 0;
        f1 << 0, 0, 0, 1;
      } else if (q == g.target) {
        f1 << 0, 1, 1, 0;
      }
      acc0 = kron(acc0, f0);
      acc1 = kron(acc1, f1);
    }
    return acc0 + acc1;
  }
  const double x = g.angle_sign * theta[static_cast<std::size_t>(g.param)];
  const double c = std::cos(0.5 * x), s = std::sin(0.5 * x);
  Eigen::Matrix2cd u;
  if (g.kind == GateKind::Rx)
    u << c, -1i * s, -1i * s, c;
  else
    u << std::exp(-0.5i * x), 0, 0, std::exp(0.5i * x);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n; ++q) acc = kron(acc, q == g.target ? Eigen::MatrixXcd(u) : eye(1));
  return acc;
}

}  // namespace

TEST_CASE("zero state is the first basis vector") {
  const StateVector s = StateVector::zero_state(3);
  REQUIRE(s.amps.size() == 8);
  CHECK(s.amps[0] == std::complex<double>(1.0, 0.0));
  for (std::size_t i = 1; i < 8; ++i) CHECK(s.amps[i] == std::complex<double>(0.0, 0.0));
  CHECK(s.norm2() == doctest::Approx(1.0));
}

TEST_CASE("half-angle rotations match their closed forms") {
  using namespace std::complex_literals;
  std::vector<double> theta{std::numbers::pi};
  StateVector s = StateVector::zero_state(1);
  apply_gate(s, Gate{GateKind::Rx, 0, -1, 0, 1.0}, theta);
  CHECK(std::abs(s.amps[0]) < 1e-15);
  CHECK(std::abs(s.amps[1] - (-1i)) < 1e-15);

  StateVector z = StateVector::zero_state(1);
  theta[0] = 0.7;
  apply_gate(z, Gate{GateKind::Rz, 0, -1, 0, 1.0}, theta);
  CHECK(std::abs(z.amps[0] - std::exp(-0.35i)) < 1e-15);
  CHECK(std::abs(z.amps[1]) == 0.0);
}

TEST_CASE("gate application matches the dense Kronecker oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 3);
    const int r = static_cast<int>(rng.next_u64() % 3);
    const ParamCircuit c = build_ansatz(n, r);
    const std::vector<double> theta = random_angles(rng, c.num_params);
    Eigen::VectorXcd v = as_vector(StateVector::zero_state(n));
    for (const Gate& g : c.gates) v = dense_gate_oracle(n, g, theta) * v;
    const StateVector got = simulate_state(c, theta);
    CHECK((as_vector(got) - v).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("the inverted circuit undoes the forward circuit") {
  Rng rng(31337);
  const ParamCircuit c = build_ansatz(4, 3);
  const std::vector<double> theta = random_angles(rng, c.num_params);
  StateVector s = simulate_state(c, theta);
  for (const Gate& g : c.inverted().gates) apply_gate(s, g, theta);
  CHECK(std::abs(s.amps[0] - std::complex<double>(1.0, 0.0)) < 1e-12);
  CHECK(s.norm2() == doctest::Approx(1.0));
}

TEST_CASE("exact expectation matches the dense quadratic form") {
  Rng rng(515);
  const ParamCircuit c = build_ansatz(3, 2);
  const std::vector<double> theta = random_angles(rng, c.num_params);
  const StateVector s = simulate_state(c, theta);
  const PauliSum ham = tfim_hamiltonian(3, 1.0, 1.5);
  const Eigen::VectorXcd v = as_vector(s);
  const double want = (v.adjoint() * dense_sum_oracle(ham) * v)(0, 0).real();
  CHECK(exact_expectation(s, ham) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("marginal zero probabilities match direct summation") {
  Rng rng(616);
  const ParamCircuit c = build_ansatz(3, 1);
  const std::vector<double> theta = random_angles(rng, c.num_params);
  const StateVector s = simulate_state(c, theta);
  const std::vector<double> got = marginal_zero_probs(s);
  REQUIRE(got.size() == 3);
  for (int q = 0; q < 3; ++q) {
    double want = 0.0;
    for (std::size_t idx = 0; idx < s.amps.size(); ++idx) {
      const bool bit_set = (idx >> (3 - 1 - q)) & 1;  // qubit 0 = most significant
      if (!bit_set) want += std::norm(s.amps[idx]);
    }
    CHECK(got[static_cast<std::size_t>(q)] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("pauli sampling: eigenstates give deterministic outcomes") {
  Rng rng(717);
  ShotCounter counter;
  const StateVector s = StateVector::zero_state(2);
  const auto z_outcomes = sample_pauli(s, PauliString::from_label("ZI"), 50, rng, &counter);
  for (int o : z_outcomes) CHECK(o == 1);
  CHECK(counter.sampled == 50);

  // Identity measurement spends shots but needs no randomness.
  Rng before = rng;
  const auto id_outcomes = sample_pauli(s, PauliString::identity(2), 10, rng, &counter);
  for (int o : id_outcomes) CHECK(o == 1);
  CHECK(counter.sampled == 60);
  CHECK(rng.next_u64() == before.next_u64());
}

TEST_CASE("pauli sampling: X on |0> is an unbiased coin") {
  Rng rng(818);
  const StateVector s = StateVector::zero_state(1);
  const auto outcomes = sample_pauli(s, PauliString::from_label("X"), 100000, rng);
  long sum = 0;
  for (int o : outcomes) {
    CHECK((o == 1 || o == -1));
    sum += o;
  }
  CHECK(std::abs(static_cast<double>(sum)) / 100000.0 < 0.02);
}

TEST_CASE("pauli sampling statistics reproduce the exact expectation") {
  Rng rng(919);
  const ParamCircuit c = build_ansatz(2, 1);
  const std::vector<double> theta = random_angles(rng, c.num_params);
  const StateVector s = simulate_state(c, theta);
  const PauliString p = PauliString::from_label("YX");
  PauliSum as_sum(2);
  as_sum.add(1.0, p);
  const double want = exact_expectation(s, as_sum);
  const auto outcomes = sample_pauli(s, p, 200000, rng);
  double mean = 0.0;
  for (int o : outcomes) mean += o;
  mean /= static_cast<double>(outcomes.size());
  CHECK(std::abs(mean - want) < 0.02);
}

TEST_CASE("bitstring sampling follows |amps|^2") {
  Rng rng(1020);
  std::vector<double> theta{std::numbers::pi / 2};
  StateVector s = StateVector::zero_state(1);
  apply_gate(s, Gate{GateKind::Rx, 0, -1, 0, 1.0}, theta);  // |0>,|1> equal weight
  ShotCounter counter;
  const auto draws = sample_bitstrings(s, 100000, rng, &counter);
  CHECK(counter.sampled == 100000);
  long ones = 0;
  for (auto idx : draws) {
    CHECK(idx < 2);
    ones += static_cast<long>(idx);
  }
  CHECK(static_cast<double>(ones) / 100000.0 == doctest::Approx(0.5).epsilon(0.03));
}
