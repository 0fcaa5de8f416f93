#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sglbo/cost.hpp"
#include "sglbo/rng.hpp"

namespace sglbo {

/// Squared-exponential kernel hyperparameters and observation noise:
///   k(a, b) = tau2 * exp(-(a - b)^2 / (2 ell^2)),   y ~ N(f, sigma2).
struct GpHyperparams {
  double tau2 = 0.2;
  double ell = 0.7;
  double sigma2 = 0.5 * (1e-5 + 5.0);  // midpoint of its search interval
};

struct GpBounds {
  double tau2_lo = 1e-3, tau2_hi = 5.0;
  double ell_lo = 1e-3, ell_hi = 1.0;
  double sigma2_lo = 1e-5, sigma2_hi = 5.0;
};

/// 1D observations (eta_i, y_i).
struct GpDataset {
  std::vector<double> points;
  std::vector<double> values;

  std::size_t size() const { return points.size(); }
  void add(double x, double y) {
    points.push_back(x);
    values.push_back(y);
  }
};

double gp_kernel(double a, double b, const GpHyperparams& hp);

/// Exact Gaussian log marginal likelihood
///   -1/2 y^T (K + sigma2 I)^-1 y - 1/2 log det(K + sigma2 I) - (N/2) log 2 pi
/// via Cholesky; a failed factorization retries once with 1e-8 jitter and
/// then raises NumericError. When `grad` is non-null the analytic gradient
/// w.r.t. (tau2, ell, sigma2) is written via
/// d/dphi = 1/2 tr((alpha alpha^T - A^-1) dA/dphi), alpha = A^-1 y.
double gp_log_marginal_likelihood(const GpDataset& data, const GpHyperparams& hp,
                                  Eigen::Vector3d* grad = nullptr);

/// Type-II maximum likelihood: bounded quasi-Newton ascent from the fixed
/// default start plus `restarts` uniform-random starts inside the bounds;
/// best final likelihood wins. If every start fails numerically the fixed
/// defaults are returned and a warning is logged.
GpHyperparams gp_fit_hyperparams(const GpDataset& data, Rng& rng,
                                 const GpBounds& bounds = {}, int restarts = 10);

/// Exact GP posterior over `queries`: mean = K*^T (K + sigma2 I)^-1 y (so the
/// far-field mean decays to the prior mean 0), covariance symmetrized and
/// eigenvalue-floored at zero to stay positive semidefinite.
void gp_posterior(const GpDataset& data, const GpHyperparams& hp,
                  std::span<const double> queries, Eigen::VectorXd& mean,
                  Eigen::MatrixXd& cov);

/// Posterior mean only (no covariance work).
Eigen::VectorXd gp_posterior_mean(const GpDataset& data, const GpHyperparams& hp,
                                  std::span<const double> queries);

/// Thompson sampling over a candidate grid: one joint draw from the posterior
/// (eigendecomposition square root), argmin of the sampled path; exact value
/// ties break toward the smallest |candidate|.
double gp_thompson_pick(const GpDataset& data, const GpHyperparams& hp,
                        std::span<const double> candidates, Rng& rng);

struct LineBoSettings {
  int init_queries = 5;     // eta = 0 forced first, then uniform draws
  int refine_rounds = 5;    // Thompson-guided queries, refit each round
  int thompson_grid = 101;
  int mean_grid = 1001;     // final predictive-mean argmin grid
  int restarts = 10;
  GpBounds bounds;
};

struct LineBoResult {
  double eta_star = 0.0;
  std::vector<double> next_point;
  std::int64_t shots_used = 0;  // (init_queries + refine_rounds) * s_cost
  GpDataset dataset;            // raw (uncentered) observations
};

/// One-dimensional Bayesian optimization of the step size along the descent
/// direction -g_hat from theta, on eta in [-eta_max, eta_max]. Each query
/// spends s_cost measurement shots. Observations are centered (mean
/// subtracted) for GP fitting; argmins are invariant under the shift.
LineBoResult line_bo(const Cost& cost, std::span<const double> theta,
                     std::span<const double> g_hat, double eta_max,
                     std::int64_t s_cost, Rng& rng, const LineBoSettings& settings = {});

}  // namespace sglbo
