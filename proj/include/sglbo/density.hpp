#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sglbo/circuit.hpp"
#include "sglbo/common.hpp"
#include "sglbo/noise.hpp"
#include "sglbo/pauli.hpp"
#include "sglbo/rng.hpp"

namespace sglbo {

/// Mixed n-qubit state as a dense density matrix (basis convention as in
/// StateVector: qubit 0 is the most significant index bit).
struct DensityMatrix {
  int num_qubits = 0;
  Eigen::MatrixXcd rho;

  static DensityMatrix zero_state(int n);
  double trace_real() const;
};

void apply_gate(DensityMatrix& state, const Gate& g, std::span<const double> theta);

/// Single-qubit depolarizing channel of probability p: with probability p the
/// qubit's state is replaced by the maximally mixed state I/2.
void apply_depolarizing(DensityMatrix& state, int qubit, double p);

/// Joint two-qubit depolarizing channel: with probability p the pair's state
/// is replaced by I/4 (equivalently, one of the 15 non-identity two-qubit
/// Paulis applied with probability p/16 each).
void apply_depolarizing_pair(DensityMatrix& state, int qa, int qb, double p);

/// Noise following one gate: RX draws the qubit's single-qubit depolarizing
/// rate, RZ is noiseless (virtual frame rotation), CNOT draws the coupled
/// pair's joint rate. Raises TopologyError for qubits or pairs the device
/// does not provide.
void apply_gate_noise(DensityMatrix& state, const Gate& g, const NoiseModel& model);

/// Exact mixed-state circuit simulation, with per-gate noise channels when a
/// model is supplied. Guarded: n > 6 qubits raise ResourceError.
DensityMatrix simulate_density(const ParamCircuit& c, std::span<const double> theta,
                               const NoiseModel* noise);

/// Tr[sum * rho]; imaginary residue discarded.
double expectation(const DensityMatrix& state, const PauliSum& sum);

std::vector<double> marginal_zero_probs(const DensityMatrix& state);

/// Computational-basis samples from diag(rho); when a model is supplied every
/// qubit's read bit is then flipped with its readout-error probability.
std::vector<std::uint64_t> sample_with_readout(const DensityMatrix& state,
                                               const NoiseModel* noise,
                                               std::int64_t shots, Rng& rng,
                                               ShotCounter* counter = nullptr);

/// Pauli-string eigenvalue samples (cf. sample_pauli), with readout bit-flips
/// applied to the measured (non-identity) qubits before the parity is taken.
std::vector<int> sample_pauli_with_readout(const DensityMatrix& state, const PauliString& p,
                                           const NoiseModel* noise, std::int64_t shots,
                                           Rng& rng, ShotCounter* counter = nullptr);

/// Cumulative basis-index distribution of measuring `p` on a mixed state
/// (readout flips are applied per drawn index by the caller). Precondition:
/// p is not the identity.
std::vector<double> pauli_measurement_distribution(const DensityMatrix& state,
                                                   const PauliString& p,
                                                   std::uint64_t& parity_mask);

}  // namespace sglbo
