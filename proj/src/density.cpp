#include "sglbo/density.hpp"

#include <bit>
#include <cmath>

#include "sglbo/errors.hpp"

namespace sglbo {

namespace {

using cxd = std::complex<double>;

int bit_of(int num_qubits, int qubit) { return num_qubits - 1 - qubit; }

/// rho -> U rho U^dagger for a single-qubit unitary U acting on `bitpos`.
void conjugate_1q(Eigen::MatrixXcd& rho, int bitpos, cxd u00, cxd u01, cxd u10, cxd u11) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index step = Eigen::Index{1} << bitpos;
  // Left-multiply by U (row pairs).
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index base = 0; base < dim; base += 2 * step) {
      for (Eigen::Index i = base; i < base + step; ++i) {
        const cxd a0 = rho(i, c);
        const cxd a1 = rho(i + step, c);
        rho(i, c) = u00 * a0 + u01 * a1;
        rho(i + step, c) = u10 * a0 + u11 * a1;
      }
    }
  }
  // Right-multiply by U^dagger (column pairs).
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index base = 0; base < dim; base += 2 * step) {
      for (Eigen::Index j = base; j < base + step; ++j) {
        const cxd a0 = rho(r, j);
        const cxd a1 = rho(r, j + step);
        rho(r, j) = a0 * std::conj(u00) + a1 * std::conj(u01);
        rho(r, j + step) = a0 * std::conj(u10) + a1 * std::conj(u11);
      }
    }
  }
}

/// rho -> P rho P for the CNOT basis permutation.
void conjugate_cnot(Eigen::MatrixXcd& rho, int cbitpos, int tbitpos) {
  const Eigen::Index dim = rho.rows();
  const Eigen::Index cbit = Eigen::Index{1} << cbitpos;
  const Eigen::Index tbit = Eigen::Index{1} << tbitpos;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if ((r & cbit) && !(r & tbit)) rho.row(r).swap(rho.row(r | tbit));
  }
  for (Eigen::Index c = 0; c < dim; ++c) {
    if ((c & cbit) && !(c & tbit)) rho.col(c).swap(rho.col(c | tbit));
  }
}

void check_device_qubit(const NoiseModel& model, int q) {
  if (q < 0 || q >= model.num_qubits())
    throw TopologyError("device has no qubit q" + std::to_string(q));
}

std::vector<double> diag_cumulative(const Eigen::MatrixXcd& rho) {
  std::vector<double> cumulative(static_cast<std::size_t>(rho.rows()));
  double acc = 0.0;
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    acc += std::max(rho(r, r).real(), 0.0);  // clamp tiny negative rounding
    cumulative[static_cast<std::size_t>(r)] = acc;
  }
  return cumulative;
}

}  // namespace

DensityMatrix DensityMatrix::zero_state(int n) {
  if (n < 1) throw ArgumentError("DensityMatrix: need at least one qubit");
  DensityMatrix d;
  d.num_qubits = n;
  const Eigen::Index dim = Eigen::Index{1} << n;
  d.rho = Eigen::MatrixXcd::Zero(dim, dim);
  d.rho(0, 0) = 1.0;
  return d;
}

double DensityMatrix::trace_real() const { return rho.trace().real(); }

void apply_gate(DensityMatrix& state, const Gate& g, std::span<const double> theta) {
  const int n = state.num_qubits;
  if (g.target < 0 || g.target >= n) throw ArgumentError("apply_gate: qubit out of range");
  switch (g.kind) {
    case GateKind::Rx: {
      if (g.param < 0 || g.param >= static_cast<int>(theta.size()))
        throw ArgumentError("apply_gate: parameter index out of range");
      const double half = 0.5 * g.angle_sign * theta[static_cast<std::size_t>(g.param)];
      const double c = std::cos(half);
      const double s = std::sin(half);
      conjugate_1q(state.rho, bit_of(n, g.target), {c, 0}, {0, -s}, {0, -s}, {c, 0});
      break;
    }
    case GateKind::Rz: {
      if (g.param < 0 || g.param >= static_cast<int>(theta.size()))
        throw ArgumentError("apply_gate: parameter index out of range");
      const double half = 0.5 * g.angle_sign * theta[static_cast<std::size_t>(g.param)];
      conjugate_1q(state.rho, bit_of(n, g.target), {std::cos(half), -std::sin(half)}, {0, 0},
                   {0, 0}, {std::cos(half), std::sin(half)});
      break;
    }
    case GateKind::Cnot: {
      if (g.control < 0 || g.control >= n) throw ArgumentError("apply_gate: qubit out of range");
      if (g.control == g.target) throw ArgumentError("apply_gate: CNOT control equals target");
      conjugate_cnot(state.rho, bit_of(n, g.control), bit_of(n, g.target));
      break;
    }
  }
}

void apply_depolarizing(DensityMatrix& state, int qubit, double p) {
  if (qubit < 0 || qubit >= state.num_qubits)
    throw ArgumentError("apply_depolarizing: qubit out of range");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("apply_depolarizing: p outside [0,1]");
  if (p == 0.0) return;
  const Eigen::Index dim = state.rho.rows();
  const Eigen::Index bit = Eigen::Index{1} << bit_of(state.num_qubits, qubit);
  for (Eigen::Index rb = 0; rb < dim; ++rb) {
    if (rb & bit) continue;
    for (Eigen::Index cb = 0; cb < dim; ++cb) {
      if (cb & bit) continue;
      const cxd d00 = state.rho(rb, cb);
      const cxd d11 = state.rho(rb | bit, cb | bit);
      const cxd mixed = 0.5 * p * (d00 + d11);
      state.rho(rb, cb) = (1.0 - p) * d00 + mixed;
      state.rho(rb | bit, cb | bit) = (1.0 - p) * d11 + mixed;
      state.rho(rb, cb | bit) *= 1.0 - p;
      state.rho(rb | bit, cb) *= 1.0 - p;
    }
  }
}

void apply_depolarizing_pair(DensityMatrix& state, int qa, int qb, double p) {
  const int n = state.num_qubits;
  if (qa < 0 || qa >= n || qb < 0 || qb >= n)
    throw ArgumentError("apply_depolarizing_pair: qubit out of range");
  if (qa == qb) throw ArgumentError("apply_depolarizing_pair: qubits must differ");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("apply_depolarizing_pair: p outside [0,1]");
  if (p == 0.0) return;
  const Eigen::Index dim = state.rho.rows();
  const Eigen::Index abit = Eigen::Index{1} << bit_of(n, qa);
  const Eigen::Index bbit = Eigen::Index{1} << bit_of(n, qb);
  const Eigen::Index offs[4] = {0, abit, bbit, abit | bbit};
  for (Eigen::Index rb = 0; rb < dim; ++rb) {
    if (rb & (abit | bbit)) continue;
    for (Eigen::Index cb = 0; cb < dim; ++cb) {
      if (cb & (abit | bbit)) continue;
      cxd diag_sum{0.0, 0.0};
      for (Eigen::Index m : offs) diag_sum += state.rho(rb | m, cb | m);
      const cxd mixed = 0.25 * p * diag_sum;
      for (Eigen::Index m1 : offs) {
        for (Eigen::Index m2 : offs) {
          cxd& entry = state.rho(rb | m1, cb | m2);
          entry *= 1.0 - p;
          if (m1 == m2) entry += mixed;
        }
      }
    }
  }
}

void apply_gate_noise(DensityMatrix& state, const Gate& g, const NoiseModel& model) {
  switch (g.kind) {
    case GateKind::Rx:
      check_device_qubit(model, g.target);
      apply_depolarizing(state, g.target, model.single_qubit_rate[static_cast<std::size_t>(g.target)]);
      break;
    case GateKind::Rz:
      check_device_qubit(model, g.target);  // still must exist on the device
      break;
    case GateKind::Cnot:
      check_device_qubit(model, g.control);
      check_device_qubit(model, g.target);
      apply_depolarizing_pair(state, g.control, g.target, model.cnot_rate(g.control, g.target));
      break;
  }
}

DensityMatrix simulate_density(const ParamCircuit& c, std::span<const double> theta,
                               const NoiseModel* noise) {
  if (c.num_qubits > 6) throw ResourceError("simulate_density: refusing n > 6 qubits");
  if (static_cast<int>(theta.size()) != c.num_params)
    throw ArgumentError("simulate_density: parameter vector has wrong length");
  DensityMatrix d = DensityMatrix::zero_state(c.num_qubits);
  for (const auto& g : c.gates) {
    apply_gate(d, g, theta);
    if (noise) apply_gate_noise(d, g, *noise);
  }
  return d;
}

double expectation(const DensityMatrix& state, const PauliSum& sum) {
  if (sum.num_qubits() != state.num_qubits)
    throw ArgumentError("expectation: qubit count mismatch");
  // Tr[P rho] = sum_u phase(u) rho(u, u ^ flip) per term.
  const std::size_t dim = static_cast<std::size_t>(state.rho.rows());
  cxd acc{0.0, 0.0};
  for (const auto& term : sum.terms()) {
    const PauliBasisAction act = basis_action(term.string);
    cxd t{0.0, 0.0};
    for (std::size_t u = 0; u < dim; ++u)
      t += act.phase(u) * state.rho(static_cast<Eigen::Index>(u),
                                    static_cast<Eigen::Index>(u ^ act.flip));
    acc += term.coeff * t;
  }
  return acc.real();
}

std::vector<double> marginal_zero_probs(const DensityMatrix& state) {
  const int n = state.num_qubits;
  std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
  const Eigen::Index dim = state.rho.rows();
  for (Eigen::Index r = 0; r < dim; ++r) {
    const double p = std::max(state.rho(r, r).real(), 0.0);
    for (int q = 0; q < n; ++q) {
      if (!(r >> bit_of(n, q) & 1)) probs[static_cast<std::size_t>(q)] += p;
    }
  }
  return probs;
}

std::vector<std::uint64_t> sample_with_readout(const DensityMatrix& state, const NoiseModel* noise,
                                               std::int64_t shots, Rng& rng, ShotCounter* counter) {
  if (shots < 1) throw ArgumentError("sample_with_readout: need at least one shot");
  const int n = state.num_qubits;
  if (noise && noise->num_qubits() < n)
    throw TopologyError("device has fewer qubits than the circuit");
  const auto cumulative = diag_cumulative(state.rho);
  std::vector<std::uint64_t> out(static_cast<std::size_t>(shots));
  for (std::int64_t s = 0; s < shots; ++s) {
    std::uint64_t idx = rng.categorical(cumulative);
    if (noise) {
      for (int q = 0; q < n; ++q) {
        if (rng.bernoulli(noise->readout_error[static_cast<std::size_t>(q)]))
          idx ^= std::uint64_t{1} << bit_of(n, q);
      }
    }
    out[static_cast<std::size_t>(s)] = idx;
  }
  if (counter) counter->add(shots);
  return out;
}

std::vector<double> pauli_measurement_distribution(const DensityMatrix& state,
                                                   const PauliString& p,
                                                   std::uint64_t& parity_mask) {
  const int n = state.num_qubits;
  if (p.num_qubits() != n)
    throw ArgumentError("pauli_measurement_distribution: qubit count mismatch");
  if (p.is_identity())
    throw ArgumentError("pauli_measurement_distribution: identity string has no distribution");
  Eigen::MatrixXcd rho = state.rho;
  constexpr double inv_sqrt2 = 0.70710678118654752440;
  parity_mask = 0;
  for (int q = 0; q < n; ++q) {
    const PauliOp op = p.ops[static_cast<std::size_t>(q)];
    if (op == PauliOp::I) continue;
    const int bitpos = bit_of(n, q);
    if (op == PauliOp::X) {
      conjugate_1q(rho, bitpos, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {inv_sqrt2, 0}, {-inv_sqrt2, 0});
    } else if (op == PauliOp::Y) {
      conjugate_1q(rho, bitpos, {inv_sqrt2, 0}, {0, -inv_sqrt2}, {inv_sqrt2, 0}, {0, inv_sqrt2});
    }
    parity_mask |= std::uint64_t{1} << bitpos;
  }
  return diag_cumulative(rho);
}

std::vector<int> sample_pauli_with_readout(const DensityMatrix& state, const PauliString& p,
                                           const NoiseModel* noise, std::int64_t shots,
                                           Rng& rng, ShotCounter* counter) {
  const int n = state.num_qubits;
  if (p.num_qubits() != n) throw ArgumentError("sample_pauli_with_readout: qubit count mismatch");
  if (shots < 1) throw ArgumentError("sample_pauli_with_readout: need at least one shot");
  std::vector<int> outcomes(static_cast<std::size_t>(shots), 1);
  if (p.is_identity()) {
    if (counter) counter->add(shots);
    return outcomes;
  }
  if (noise && noise->num_qubits() < n)
    throw TopologyError("device has fewer qubits than the circuit");

  std::uint64_t parity_mask = 0;
  const auto cumulative = pauli_measurement_distribution(state, p, parity_mask);
  std::vector<int> measured;  // qubits entering the parity
  for (int q = 0; q < n; ++q) {
    if (p.ops[static_cast<std::size_t>(q)] != PauliOp::I) measured.push_back(q);
  }
  for (std::int64_t s = 0; s < shots; ++s) {
    std::uint64_t idx = rng.categorical(cumulative);
    if (noise) {
      for (int q : measured) {
        if (rng.bernoulli(noise->readout_error[static_cast<std::size_t>(q)]))
          idx ^= std::uint64_t{1} << bit_of(n, q);
      }
    }
    outcomes[static_cast<std::size_t>(s)] = std::popcount(idx & parity_mask) & 1 ? -1 : 1;
  }
  if (counter) counter->add(shots);
  return outcomes;
}

}  // namespace sglbo
