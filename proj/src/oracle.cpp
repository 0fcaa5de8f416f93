#include "sglbo/oracle.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "sglbo/errors.hpp"
#include "sglbo/gradient.hpp"
#include "sglbo/numopt.hpp"

namespace sglbo {

namespace {

/// Largest eigenvalue of A = c I - H by power iteration with Rayleigh
/// quotients; the bottom of H's spectrum maps to the top of A's.
double shifted_power_minimum(const PauliSum& h, double shift) {
  const std::size_t dim = std::size_t{1} << h.num_qubits();
  std::vector<std::complex<double>> v(dim), w(dim);
  Rng rng(0x0bacca1aull);
  double norm2 = 0.0;
  for (auto& a : v) {
    a = {rng.normal(), rng.normal()};
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : v) a *= inv;

  double prev = 0.0;
  for (int k = 0; k < 100000; ++k) {
    apply_pauli_sum(h, v, w);
    double rayleigh = 0.0;
    double wnorm2 = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      w[r] = shift * v[r] - w[r];  // (c I - H) v
      rayleigh += (std::conj(v[r]) * w[r]).real();
      wnorm2 += std::norm(w[r]);
    }
    const double lambda_min = shift - rayleigh;
    if (k > 0 && std::abs(lambda_min - prev) <= 1e-12 * std::max(1.0, std::abs(lambda_min)))
      return lambda_min;
    prev = lambda_min;
    if (wnorm2 == 0.0) return lambda_min;  // v is an exact eigenvector
    const double winv = 1.0 / std::sqrt(wnorm2);
    for (std::size_t r = 0; r < dim; ++r) v[r] = w[r] * winv;
  }
  throw NumericError("ground_state_energy: power iteration did not converge");
}

}  // namespace

double ground_state_energy(const PauliSum& h) {
  if (h.size() == 0) throw ArgumentError("ground_state_energy: sum has no terms");
  const int n = h.num_qubits();
  if (n > 12) throw ResourceError("ground_state_energy: refusing n > 12 qubits");
  if (n <= 10) {
    const Eigen::MatrixXcd mat = dense_matrix(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(mat, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
      throw NumericError("ground_state_energy: eigendecomposition failed");
    return eig.eigenvalues().minCoeff();
  }
  // Shift by the coefficient-sum bound so c I - H is positive semidefinite
  // with its top eigenvalue at c - E_min.
  return shifted_power_minimum(h, h.weight_l1());
}

ConstrainedMinResult ansatz_constrained_minimum(const Cost& cost, int starts, Rng& rng,
                                                double grad_tol, int max_iter) {
  if (starts < 1) throw ArgumentError("ansatz_constrained_minimum: need at least one start");
  const int d = cost.dimension();

  const ObjectiveFn fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
    const std::span<const double> theta(x.data(), static_cast<std::size_t>(x.size()));
    if (grad) {
      const std::vector<double> g = exact_gradient(cost, theta);
      *grad = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
    }
    return cost.exact_value(theta);
  };

  BfgsOptions options;
  options.max_iter = max_iter;
  options.grad_tol = grad_tol;

  ConstrainedMinResult result;
  bool have_best = false;
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x0(d);
    for (int i = 0; i < d; ++i) x0[i] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const BfgsResult res = minimize_bfgs(fg, x0, options);
    if (!have_best || res.value < result.value) {
      have_best = true;
      result.value = res.value;
      result.argmin.assign(res.x.data(), res.x.data() + res.x.size());
    }
  }
  result.starts_used = starts;
  return result;
}

}  // namespace sglbo
