#include "sglbo/statevector.hpp"

#include <bit>
#include <cmath>

#include "sglbo/errors.hpp"

namespace sglbo {

namespace {

using cxd = std::complex<double>;

/// Apply a 2x2 unitary to the amplitude pairs split by `bitpos`.
void apply_1q(std::vector<cxd>& amps, int bitpos, cxd u00, cxd u01, cxd u10, cxd u11) {
  const std::size_t step = std::size_t{1} << bitpos;
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * step) {
    for (std::size_t i = base; i < base + step; ++i) {
      const cxd a0 = amps[i];
      const cxd a1 = amps[i + step];
      amps[i] = u00 * a0 + u01 * a1;
      amps[i + step] = u10 * a0 + u11 * a1;
    }
  }
}

int bit_of(int num_qubits, int qubit) { return num_qubits - 1 - qubit; }

void check_qubit(const StateVector& s, int q, const char* what) {
  if (q < 0 || q >= s.num_qubits) throw ArgumentError(std::string(what) + ": qubit out of range");
}

/// Rotate `amps` so that measuring Z afterwards measures the given Pauli op:
/// X -> H, Y -> H S^dagger (S^dagger first, then H).
void rotate_to_eigenbasis(std::vector<cxd>& amps, int bitpos, PauliOp op) {
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  if (op == PauliOp::X) {
    apply_1q(amps, bitpos, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {-inv_sqrt2, 0});
  } else if (op == PauliOp::Y) {
    // H * S^dagger = (1/sqrt2) [[1, -i], [1, i]]
    apply_1q(amps, bitpos, {inv_sqrt2, 0}, {0, -inv_sqrt2}, {inv_sqrt2, 0}, {0, inv_sqrt2});
  }
}

}  // namespace

StateVector StateVector::zero_state(int n) {
  if (n < 1) throw ArgumentError("StateVector: need at least one qubit");
  StateVector s;
  s.num_qubits = n;
  s.amps.assign(std::size_t{1} << n, cxd{0.0, 0.0});
  s.amps[0] = {1.0, 0.0};
  return s;
}

double StateVector::norm2() const {
  double acc = 0.0;
  for (const auto& a : amps) acc += std::norm(a);
  return acc;
}

void apply_gate(StateVector& state, const Gate& g, std::span<const double> theta) {
  check_qubit(state, g.target, "apply_gate");
  switch (g.kind) {
    case GateKind::Rx: {
      if (g.param < 0 || g.param >= static_cast<int>(theta.size()))
        throw ArgumentError("apply_gate: parameter index out of range");
      const double half = 0.5 * g.angle_sign * theta[static_cast<std::size_t>(g.param)];
      const double c = std::cos(half);
      const double s = std::sin(half);
      apply_1q(state.amps, bit_of(state.num_qubits, g.target), {c, 0}, {0, -s}, {0, -s}, {c, 0});
      break;
    }
    case GateKind::Rz: {
      if (g.param < 0 || g.param >= static_cast<int>(theta.size()))
        throw ArgumentError("apply_gate: parameter index out of range");
      const double half = 0.5 * g.angle_sign * theta[static_cast<std::size_t>(g.param)];
      const cxd lo{std::cos(half), -std::sin(half)};
      const cxd hi{std::cos(half), std::sin(half)};
      apply_1q(state.amps, bit_of(state.num_qubits, g.target), lo, {0, 0}, {0, 0}, hi);
      break;
    }
    case GateKind::Cnot: {
      check_qubit(state, g.control, "apply_gate");
      if (g.control == g.target) throw ArgumentError("apply_gate: CNOT control equals target");
      const std::size_t cbit = std::size_t{1} << bit_of(state.num_qubits, g.control);
      const std::size_t tbit = std::size_t{1} << bit_of(state.num_qubits, g.target);
      const std::size_t dim = state.amps.size();
      for (std::size_t r = 0; r < dim; ++r) {
        if ((r & cbit) && !(r & tbit)) std::swap(state.amps[r], state.amps[r | tbit]);
      }
      break;
    }
  }
}

StateVector simulate_state(const ParamCircuit& c, std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != c.num_params)
    throw ArgumentError("simulate_state: parameter vector has wrong length");
  StateVector s = StateVector::zero_state(c.num_qubits);
  for (const auto& g : c.gates) apply_gate(s, g, theta);
  return s;
}

double exact_expectation(const StateVector& state, const PauliSum& sum) {
  if (sum.num_qubits() != state.num_qubits)
    throw ArgumentError("exact_expectation: qubit count mismatch");
  // <psi|P|psi> = sum_s conj(psi[s]) * phase(s^flip) * psi[s^flip] per term,
  // evaluated via the string's permutation/phase action.
  const std::size_t dim = state.amps.size();
  std::vector<cxd> scratch(dim);
  cxd acc{0.0, 0.0};
  for (const auto& term : sum.terms()) {
    apply_pauli_string(term.string, state.amps, scratch);
    cxd dot{0.0, 0.0};
    for (std::size_t r = 0; r < dim; ++r) dot += std::conj(state.amps[r]) * scratch[r];
    acc += term.coeff * dot;
  }
  return acc.real();
}

std::vector<double> marginal_zero_probs(const StateVector& state) {
  const int n = state.num_qubits;
  std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
  const std::size_t dim = state.amps.size();
  for (std::size_t r = 0; r < dim; ++r) {
    const double p = std::norm(state.amps[r]);
    if (p == 0.0) continue;
    for (int q = 0; q < n; ++q) {
      if (!(r >> bit_of(n, q) & 1)) probs[static_cast<std::size_t>(q)] += p;
    }
  }
  return probs;
}

std::vector<double> pauli_measurement_distribution(const StateVector& state,
                                                   const PauliString& p,
                                                   std::uint64_t& parity_mask) {
  if (p.num_qubits() != state.num_qubits)
    throw ArgumentError("pauli_measurement_distribution: qubit count mismatch");
  if (p.is_identity())
    throw ArgumentError("pauli_measurement_distribution: identity string has no distribution");
  std::vector<cxd> amps = state.amps;
  const int n = state.num_qubits;
  parity_mask = 0;
  for (int q = 0; q < n; ++q) {
    const PauliOp op = p.ops[static_cast<std::size_t>(q)];
    if (op == PauliOp::I) continue;
    rotate_to_eigenbasis(amps, bit_of(n, q), op);
    parity_mask |= std::uint64_t{1} << bit_of(n, q);
  }
  std::vector<double> cumulative(amps.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < amps.size(); ++r) {
    acc += std::norm(amps[r]);
    cumulative[r] = acc;
  }
  return cumulative;
}

std::vector<int> sample_pauli(const StateVector& state, const PauliString& p,
                              std::int64_t shots, Rng& rng, ShotCounter* counter) {
  if (p.num_qubits() != state.num_qubits)
    throw ArgumentError("sample_pauli: qubit count mismatch");
  if (shots < 1) throw ArgumentError("sample_pauli: need at least one shot");
  std::vector<int> outcomes(static_cast<std::size_t>(shots), 1);
  if (p.is_identity()) {
    // Eigenvalue +1 with certainty; no state preparation or sampling needed.
    if (counter) counter->add(shots);
    return outcomes;
  }
  std::uint64_t parity_mask = 0;
  const auto cumulative = pauli_measurement_distribution(state, p, parity_mask);
  for (std::int64_t s = 0; s < shots; ++s) {
    const std::size_t idx = rng.categorical(cumulative);
    outcomes[static_cast<std::size_t>(s)] = std::popcount(idx & parity_mask) & 1 ? -1 : 1;
  }
  if (counter) counter->add(shots);
  return outcomes;
}

std::vector<std::uint64_t> sample_bitstrings(const StateVector& state, std::int64_t shots,
                                             Rng& rng, ShotCounter* counter) {
  if (shots < 1) throw ArgumentError("sample_bitstrings: need at least one shot");
  std::vector<double> cumulative(state.amps.size());
  double acc = 0.0;
  for (std::size_t r = 0; r < state.amps.size(); ++r) {
    acc += std::norm(state.amps[r]);
    cumulative[r] = acc;
  }
  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  for (std::int64_t s = 0; s < shots; ++s)
    out[static_cast<std::size_t>(s)] = rng.categorical(cumulative);
  if (counter) counter->add(shots);
  return out;
}

}  // namespace sglbo
