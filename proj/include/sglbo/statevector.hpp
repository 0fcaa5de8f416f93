#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "sglbo/circuit.hpp"
#include "sglbo/common.hpp"
#include "sglbo/pauli.hpp"
#include "sglbo/rng.hpp"

namespace sglbo {

/// Pure n-qubit state. amps[r] is the amplitude of basis index r with qubit 0
/// as the most significant bit (matching PauliString's convention).
struct StateVector {
  int num_qubits = 0;
  std::vector<std::complex<double>> amps;

  static StateVector zero_state(int n);
  double norm2() const;
};

/// Apply one gate in place (half-angle rotation convention).
void apply_gate(StateVector& state, const Gate& g, std::span<const double> theta);

StateVector simulate_state(const ParamCircuit& c, std::span<const double> theta);

/// <psi| sum |psi>. The result of a Hermitian observable is real; the ~1e-16
/// imaginary residue of the arithmetic is discarded.
double exact_expectation(const StateVector& state, const PauliSum& sum);

/// Probability that each qubit reads 0 in the computational basis.
std::vector<double> marginal_zero_probs(const StateVector& state);

/// `shots` independent eigenvalue outcomes (+1/-1) of measuring one Pauli
/// string: basis change to the string's eigenbasis, then computational-basis
/// sampling with the outcome given by parity over the non-identity qubits.
/// The identity string yields +1 for every shot without touching the state.
/// Every produced outcome increments `counter` when attached.
std::vector<int> sample_pauli(const StateVector& state, const PauliString& p,
                              std::int64_t shots, Rng& rng,
                              ShotCounter* counter = nullptr);

/// Cumulative basis-index distribution of measuring `p` (state rotated into
/// the string's eigenbasis); the outcome of a drawn index is the parity over
/// `parity_mask`. Precondition: p is not the identity.
std::vector<double> pauli_measurement_distribution(const StateVector& state,
                                                   const PauliString& p,
                                                   std::uint64_t& parity_mask);

/// `shots` computational-basis indices drawn from |amps|^2.
std::vector<std::uint64_t> sample_bitstrings(const StateVector& state,
                                             std::int64_t shots, Rng& rng,
                                             ShotCounter* counter = nullptr);

}  // namespace sglbo
