#include "sglbo/cost.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "sglbo/errors.hpp"

namespace sglbo {

namespace {

/// Per-term measurement setup reused across single-shot draws.
struct TermSampler {
  bool identity = false;
  double sign = 1.0;
  std::vector<double> cumulative;
  std::uint64_t parity_mask = 0;
  std::vector<int> measured;  // qubits suffering readout flips
};

int draw_outcome(const TermSampler& ts, const NoiseModel* noise, int n, Rng& rng) {
  if (ts.identity) return 1;
  std::uint64_t idx = rng.categorical(ts.cumulative);
  if (noise) {
    for (int q : ts.measured) {
      if (rng.bernoulli(noise->readout_error[static_cast<std::size_t>(q)]))
        idx ^= std::uint64_t{1} << (n - 1 - q);
    }
  }
  return std::popcount(idx & ts.parity_mask) & 1 ? -1 : 1;
}

std::vector<int> measured_qubits(const PauliString& p) {
  std::vector<int> qs;
  for (int q = 0; q < p.num_qubits(); ++q) {
    if (p.ops[static_cast<std::size_t>(q)] != PauliOp::I) qs.push_back(q);
  }
  return qs;
}

}  // namespace

VqeCost::VqeCost(PauliSum hamiltonian, ParamCircuit ansatz, std::optional<NoiseModel> noise)
    : hamiltonian_(std::move(hamiltonian)), ansatz_(std::move(ansatz)), noise_(std::move(noise)) {
  if (hamiltonian_.num_qubits() != ansatz_.num_qubits)
    throw ArgumentError("VqeCost: observable and ansatz qubit counts differ");
  if (hamiltonian_.size() == 0) throw ArgumentError("VqeCost: observable has no terms");
  if (noise_ && noise_->num_qubits() < ansatz_.num_qubits)
    throw TopologyError("VqeCost: device has fewer qubits than the ansatz");
  norm_ = operator_norm(hamiltonian_);
}

double VqeCost::exact_value(std::span<const double> theta) const {
  if (!noise_) return exact_value_noiseless(theta);
  const DensityMatrix rho = simulate_density(ansatz_, theta, &*noise_);
  return expectation(rho, hamiltonian_);
}

double VqeCost::exact_value_noiseless(std::span<const double> theta) const {
  const StateVector psi = simulate_state(ansatz_, theta);
  return exact_expectation(psi, hamiltonian_);
}

CostQuery VqeCost::noisy_query(std::span<const double> theta, std::int64_t shots, Rng& rng) const {
  if (shots < 1) throw ArgumentError("noisy_query: need at least one shot");
  const TermAllocation alloc = allocate_shots(hamiltonian_, shots, rng);
  const double l1 = hamiltonian_.weight_l1();

  std::optional<StateVector> psi;
  std::optional<DensityMatrix> rho;
  if (noise_) rho = simulate_density(ansatz_, theta, &*noise_);
  else psi = simulate_state(ansatz_, theta);

  // value = (L1 / shots) * sum_k sign(c_k) * (sum of term-k outcomes): the
  // mean of per-shot importance-weighted estimators, grouped by term.
  double signed_sum = 0.0;
  const auto& terms = hamiltonian_.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::int64_t sk = alloc.counts[k];
    if (sk == 0) continue;
    std::vector<int> outcomes =
        noise_ ? sample_pauli_with_readout(*rho, terms[k].string, &*noise_, sk, rng, counter_)
               : sample_pauli(*psi, terms[k].string, sk, rng, counter_);
    std::int64_t sum = 0;
    for (int o : outcomes) sum += o;
    signed_sum += (terms[k].coeff < 0 ? -1.0 : 1.0) * static_cast<double>(sum);
  }
  return {l1 * signed_sum / static_cast<double>(shots), shots};
}

std::vector<double> VqeCost::single_shot_estimates(std::span<const double> theta,
                                                   std::int64_t shots, Rng& rng) const {
  if (shots < 1) throw ArgumentError("single_shot_estimates: need at least one shot");
  const double l1 = hamiltonian_.weight_l1();
  const int n = ansatz_.num_qubits;

  std::optional<StateVector> psi;
  std::optional<DensityMatrix> rho;
  if (noise_) rho = simulate_density(ansatz_, theta, &*noise_);
  else psi = simulate_state(ansatz_, theta);

  const auto& terms = hamiltonian_.terms();
  std::vector<double> term_cumulative;
  term_cumulative.reserve(terms.size());
  double acc = 0.0;
  for (const auto& t : terms) {
    acc += std::abs(t.coeff);
    term_cumulative.push_back(acc);
  }

  // Measurement setups are built lazily: a term never drawn costs nothing.
  std::vector<TermSampler> samplers(terms.size());
  std::vector<bool> ready(terms.size(), false);
  const NoiseModel* noise = noise_ ? &*noise_ : nullptr;

  std::vector<double> estimates(static_cast<std::size_t>(shots));
  for (std::int64_t m = 0; m < shots; ++m) {
    const std::size_t k = rng.categorical(term_cumulative);
    if (!ready[k]) {
      TermSampler& ts = samplers[k];
      ts.sign = terms[k].coeff < 0 ? -1.0 : 1.0;
      if (terms[k].string.is_identity()) {
        ts.identity = true;
      } else {
        ts.cumulative = noise_
            ? pauli_measurement_distribution(*rho, terms[k].string, ts.parity_mask)
            : pauli_measurement_distribution(*psi, terms[k].string, ts.parity_mask);
        ts.measured = measured_qubits(terms[k].string);
      }
      ready[k] = true;
    }
    const int o = draw_outcome(samplers[k], noise, n, rng);
    estimates[static_cast<std::size_t>(m)] = samplers[k].sign * l1 * o;
  }
  if (counter_) counter_->add(shots);
  return estimates;
}

VqcCost::VqcCost(ParamCircuit ansatz, std::vector<double> theta_star,
                 std::optional<NoiseModel> noise)
    : ansatz_(std::move(ansatz)), inverse_(ansatz_.inverted()),
      theta_star_(std::move(theta_star)), noise_(std::move(noise)) {
  if (static_cast<int>(theta_star_.size()) != ansatz_.num_params)
    throw ArgumentError("VqcCost: theta_star length does not match the ansatz");
  if (noise_ && noise_->num_qubits() < ansatz_.num_qubits)
    throw TopologyError("VqcCost: device has fewer qubits than the ansatz");
  prep_state_ = simulate_state(ansatz_, theta_star_);
  // The preparation half is theta-independent, so its noisy state is cached.
  if (noise_) prep_density_ = simulate_density(ansatz_, theta_star_, &*noise_);
}

StateVector VqcCost::composed_state(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != ansatz_.num_params)
    throw ArgumentError("VqcCost: parameter vector has wrong length");
  // At theta == theta* the inverse cancels the preparation algebraically;
  // skip the simulation so the ideal cost there is exactly zero.
  if (std::equal(theta.begin(), theta.end(), theta_star_.begin(), theta_star_.end()))
    return StateVector::zero_state(ansatz_.num_qubits);
  StateVector psi = prep_state_;
  for (const auto& g : inverse_.gates) apply_gate(psi, g, theta);
  return psi;
}

DensityMatrix VqcCost::composed_density(std::span<const double> theta) const {
  if (static_cast<int>(theta.size()) != ansatz_.num_params)
    throw ArgumentError("VqcCost: parameter vector has wrong length");
  DensityMatrix rho = *prep_density_;
  for (const auto& g : inverse_.gates) {
    apply_gate(rho, g, theta);
    apply_gate_noise(rho, g, *noise_);
  }
  return rho;
}

double VqcCost::exact_value(std::span<const double> theta) const {
  if (!noise_) return exact_value_noiseless(theta);
  const DensityMatrix rho = composed_density(theta);
  const auto probs = marginal_zero_probs(rho);
  double mean = 0.0;
  for (double p : probs) mean += p;
  return 1.0 - mean / static_cast<double>(probs.size());
}

double VqcCost::exact_value_noiseless(std::span<const double> theta) const {
  const StateVector psi = composed_state(theta);
  const auto probs = marginal_zero_probs(psi);
  double mean = 0.0;
  for (double p : probs) mean += p;
  return 1.0 - mean / static_cast<double>(probs.size());
}

CostQuery VqcCost::noisy_query(std::span<const double> theta, std::int64_t shots, Rng& rng) const {
  if (shots < 1) throw ArgumentError("noisy_query: need at least one shot");
  const int n = ansatz_.num_qubits;
  std::vector<std::uint64_t> draws;
  if (noise_) {
    const DensityMatrix rho = composed_density(theta);
    draws = sample_with_readout(rho, &*noise_, shots, rng, counter_);
  } else {
    const StateVector psi = composed_state(theta);
    draws = sample_bitstrings(psi, shots, rng, counter_);
  }
  // Per shot: 1 - (#zero bits)/n = popcount/n.
  double acc = 0.0;
  for (std::uint64_t idx : draws) acc += static_cast<double>(std::popcount(idx));
  return {acc / (static_cast<double>(n) * static_cast<double>(shots)), shots};
}

std::vector<double> VqcCost::single_shot_estimates(std::span<const double> theta,
                                                   std::int64_t shots, Rng& rng) const {
  if (shots < 1) throw ArgumentError("single_shot_estimates: need at least one shot");
  const int n = ansatz_.num_qubits;
  std::vector<std::uint64_t> draws;
  if (noise_) {
    const DensityMatrix rho = composed_density(theta);
    draws = sample_with_readout(rho, &*noise_, shots, rng, counter_);
  } else {
    const StateVector psi = composed_state(theta);
    draws = sample_bitstrings(psi, shots, rng, counter_);
  }
  std::vector<double> estimates(static_cast<std::size_t>(shots));
  for (std::size_t m = 0; m < draws.size(); ++m)
    estimates[m] = static_cast<double>(std::popcount(draws[m])) / static_cast<double>(n);
  return estimates;
}

}  // namespace sglbo
