#pragma once

#include <vector>

#include "sglbo/cost.hpp"
#include "sglbo/pauli.hpp"
#include "sglbo/rng.hpp"

namespace sglbo {

/// Smallest eigenvalue of the observable. Dense eigendecomposition up to 10
/// qubits; 11-12 qubits use matrix-free power iteration on c I - H (c = the
/// coefficient-sum bound), which targets the bottom of the spectrum. Above 12
/// qubits raises ResourceError.
double ground_state_energy(const PauliSum& h);

struct ConstrainedMinResult {
  double value = 0.0;
  std::vector<double> argmin;
  int starts_used = 0;
};

/// Best exact cost the ansatz can reach: multi-start quasi-Newton descent on
/// the ideal expectation with exact parameter-shift gradients, uniform random
/// starts on [-pi, pi]^D. The result upper-bounds the true minimum over the
/// ansatz manifold and (for VQE costs) lower-bounds at the ground energy.
ConstrainedMinResult ansatz_constrained_minimum(const Cost& cost, int starts, Rng& rng,
                                                double grad_tol = 1e-10, int max_iter = 2000);

}  // namespace sglbo
