#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sglbo/circuit.hpp"
#include "sglbo/common.hpp"
#include "sglbo/density.hpp"
#include "sglbo/noise.hpp"
#include "sglbo/pauli.hpp"
#include "sglbo/rng.hpp"
#include "sglbo/statevector.hpp"

namespace sglbo {

struct CostQuery {
  double value = 0.0;
  std::int64_t shots_used = 0;  // always equals the requested shot count
};

/// A shot-based objective f(theta). Exact evaluations are free diagnostics;
/// noisy queries model hardware executions and are the only thing optimizers
/// may consume. When a shot counter is attached, every measurement outcome
/// the simulators produce is tallied so shot ledgers can be audited exactly.
class Cost {
 public:
  virtual ~Cost() = default;

  virtual int dimension() const = 0;
  virtual int num_qubits() const = 0;

  /// Exact expectation of the executed (possibly noisy) model.
  virtual double exact_value(std::span<const double> theta) const = 0;

  /// Exact expectation on the ideal simulator regardless of attached noise;
  /// the evaluation metric reported in run traces.
  virtual double exact_value_noiseless(std::span<const double> theta) const = 0;

  /// Unbiased estimate of f(theta) from `shots` measurement shots.
  virtual CostQuery noisy_query(std::span<const double> theta, std::int64_t shots,
                                Rng& rng) const = 0;

  /// `shots` i.i.d. single-shot estimates whose mean is distributed like
  /// noisy_query's value (importance-sampled over observable terms).
  virtual std::vector<double> single_shot_estimates(std::span<const double> theta,
                                                    std::int64_t shots, Rng& rng) const = 0;

  /// Observable scale ||H|| entering the step-size bound and shot floors.
  virtual double observable_norm() const = 0;

  void set_shot_counter(ShotCounter* c) { counter_ = c; }
  ShotCounter* shot_counter() const { return counter_; }

 protected:
  ShotCounter* counter_ = nullptr;
};

/// Variational eigenvalue search objective: f(theta) = <H> on the ansatz
/// state, estimated term-by-term with multinomial shot allocation and
/// importance-weighted single-shot estimators O^(m) = sign(c_k) L1 o^(m),
/// L1 = sum |c_k|. With a noise model, preparation runs on the noisy
/// density-matrix simulator and measured qubits suffer readout flips.
class VqeCost : public Cost {
 public:
  VqeCost(PauliSum hamiltonian, ParamCircuit ansatz, std::optional<NoiseModel> noise = {});

  int dimension() const override { return ansatz_.num_params; }
  int num_qubits() const override { return ansatz_.num_qubits; }
  double exact_value(std::span<const double> theta) const override;
  double exact_value_noiseless(std::span<const double> theta) const override;
  CostQuery noisy_query(std::span<const double> theta, std::int64_t shots, Rng& rng) const override;
  std::vector<double> single_shot_estimates(std::span<const double> theta, std::int64_t shots,
                                            Rng& rng) const override;
  double observable_norm() const override { return norm_.value; }

  const PauliSum& hamiltonian() const { return hamiltonian_; }
  const ParamCircuit& ansatz() const { return ansatz_; }
  const NormEstimate& norm_estimate() const { return norm_; }

 private:
  PauliSum hamiltonian_;
  ParamCircuit ansatz_;
  std::optional<NoiseModel> noise_;
  NormEstimate norm_;
};

/// Compilation-fidelity objective: prepare U(theta*)|0>, undo with the
/// inverse ansatz at theta, and penalize qubits that fail to return to |0>:
///   f(theta) = 1 - (1/n) sum_j Pr[qubit j reads 0].
/// A single computational-basis measurement serves all qubits, so one shot
/// is one circuit execution. The effective observable norm is 1.
class VqcCost : public Cost {
 public:
  VqcCost(ParamCircuit ansatz, std::vector<double> theta_star, std::optional<NoiseModel> noise = {});

  int dimension() const override { return ansatz_.num_params; }
  int num_qubits() const override { return ansatz_.num_qubits; }
  double exact_value(std::span<const double> theta) const override;
  double exact_value_noiseless(std::span<const double> theta) const override;
  CostQuery noisy_query(std::span<const double> theta, std::int64_t shots, Rng& rng) const override;
  std::vector<double> single_shot_estimates(std::span<const double> theta, std::int64_t shots,
                                            Rng& rng) const override;
  double observable_norm() const override { return 1.0; }

  const ParamCircuit& ansatz() const { return ansatz_; }
  std::span<const double> theta_star() const { return theta_star_; }

 private:
  StateVector composed_state(std::span<const double> theta) const;
  DensityMatrix composed_density(std::span<const double> theta) const;

  ParamCircuit ansatz_;
  ParamCircuit inverse_;
  std::vector<double> theta_star_;
  std::optional<NoiseModel> noise_;
  StateVector prep_state_;                  // U(theta*)|0>, ideal
  std::optional<DensityMatrix> prep_density_;  // noisy preparation, cached
};

}  // namespace sglbo
