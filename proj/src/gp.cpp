#include "sglbo/gp.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

#include "sglbo/errors.hpp"
#include "sglbo/numopt.hpp"

namespace sglbo {

namespace {

constexpr double kJitter = 1e-8;

Eigen::MatrixXd kernel_matrix(const GpDataset& data, const GpHyperparams& hp) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = gp_kernel(data.points[static_cast<std::size_t>(i)],
                                 data.points[static_cast<std::size_t>(j)], hp);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

/// Cholesky of K + sigma2 I, retrying once with jitter before giving up.
Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& k, double sigma2) {
  const Eigen::Index n = k.rows();
  Eigen::MatrixXd a = k + sigma2 * Eigen::MatrixXd::Identity(n, n);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  a += kJitter * Eigen::MatrixXd::Identity(n, n);
  llt.compute(a);
  if (llt.info() == Eigen::Success) return llt;
  throw NumericError("gp: Cholesky factorization failed even with jitter");
}

void check_dataset(const GpDataset& data) {
  if (data.size() == 0) throw ArgumentError("gp: empty dataset");
  if (data.points.size() != data.values.size())
    throw ArgumentError("gp: points and values lengths differ");
}

}  // namespace

double gp_kernel(double a, double b, const GpHyperparams& hp) {
  const double d = a - b;
  return hp.tau2 * std::exp(-d * d / (2.0 * hp.ell * hp.ell));
}

double gp_log_marginal_likelihood(const GpDataset& data, const GpHyperparams& hp,
                                  Eigen::Vector3d* grad) {
  check_dataset(data);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Map<const Eigen::VectorXd> y(data.values.data(), n);

  const Eigen::MatrixXd k = kernel_matrix(data, hp);
  const auto llt = factorize(k, hp.sigma2);
  const Eigen::VectorXd alpha = llt.solve(y);

  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixLLT()(i, i));
  const double lml = -0.5 * y.dot(alpha) - 0.5 * logdet -
                     0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  if (grad) {
    const Eigen::MatrixXd ainv = llt.solve(Eigen::MatrixXd::Identity(n, n));
    const Eigen::MatrixXd m = alpha * alpha.transpose() - ainv;
    // dA/dtau2 = K / tau2;  dA/dell = K .* d^2 / ell^3;  dA/dsigma2 = I.
    double g_tau2 = 0.0, g_ell = 0.0, g_sigma2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double diff = data.points[static_cast<std::size_t>(i)] -
                            data.points[static_cast<std::size_t>(j)];
        g_tau2 += m(i, j) * k(i, j) / hp.tau2;
        g_ell += m(i, j) * k(i, j) * diff * diff / (hp.ell * hp.ell * hp.ell);
      }
      g_sigma2 += m(i, i);
    }
    (*grad)[0] = 0.5 * g_tau2;
    (*grad)[1] = 0.5 * g_ell;
    (*grad)[2] = 0.5 * g_sigma2;
  }
  return lml;
}

GpHyperparams gp_fit_hyperparams(const GpDataset& data, Rng& rng, const GpBounds& bounds,
                                 int restarts) {
  check_dataset(data);
  const Eigen::Vector3d lo{bounds.tau2_lo, bounds.ell_lo, bounds.sigma2_lo};
  const Eigen::Vector3d hi{bounds.tau2_hi, bounds.ell_hi, bounds.sigma2_hi};

  const GpHyperparams fixed{};  // defaults double as the deterministic start
  std::vector<Eigen::Vector3d> starts;
  starts.push_back({fixed.tau2, fixed.ell, fixed.sigma2});
  for (int s = 0; s < restarts; ++s) {
    Eigen::Vector3d x;
    for (int p = 0; p < 3; ++p) x[p] = rng.uniform(lo[p], hi[p]);
    starts.push_back(x);
  }

  const ObjectiveFn neg_lml = [&](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    const GpHyperparams hp{x[0], x[1], x[2]};
    if (g) {
      Eigen::Vector3d grad;
      const double v = gp_log_marginal_likelihood(data, hp, &grad);
      *g = -grad;
      return -v;
    }
    return -gp_log_marginal_likelihood(data, hp, nullptr);
  };

  bool have_best = false;
  double best_lml = 0.0;
  Eigen::Vector3d best_x;
  BfgsOptions options;
  options.max_iter = 200;
  options.grad_tol = 1e-6;
  for (const auto& x0 : starts) {
    try {
      const BfgsResult res = minimize_bfgs_bounded(
          neg_lml, x0.cwiseMax(lo).cwiseMin(hi), lo, hi, options);
      const double lml = -res.value;
      if (!std::isfinite(lml)) continue;
      if (!have_best || lml > best_lml) {
        have_best = true;
        best_lml = lml;
        best_x = res.x;
      }
    } catch (const NumericError&) {
      continue;  // this start wandered into a non-factorizable corner
    }
  }
  if (!have_best) {
    std::cerr << "gp_fit_hyperparams: all starts failed numerically; keeping defaults\n";
    return fixed;
  }
  return GpHyperparams{best_x[0], best_x[1], best_x[2]};
}

void gp_posterior(const GpDataset& data, const GpHyperparams& hp,
                  std::span<const double> queries, Eigen::VectorXd& mean,
                  Eigen::MatrixXd& cov) {
  check_dataset(data);
  if (queries.empty()) throw ArgumentError("gp_posterior: no query points");
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index m = static_cast<Eigen::Index>(queries.size());
  const Eigen::Map<const Eigen::VectorXd> y(data.values.data(), n);

  const auto llt = factorize(kernel_matrix(data, hp), hp.sigma2);
  Eigen::MatrixXd kstar(m, n);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      kstar(i, j) = gp_kernel(queries[static_cast<std::size_t>(i)],
                              data.points[static_cast<std::size_t>(j)], hp);
  }
  mean = kstar * llt.solve(y);

  Eigen::MatrixXd kss(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = gp_kernel(queries[static_cast<std::size_t>(i)],
                                 queries[static_cast<std::size_t>(j)], hp);
      kss(i, j) = v;
      kss(j, i) = v;
    }
  }
  cov = kss - kstar * llt.solve(kstar.transpose());
  cov = 0.5 * (cov + cov.transpose());
  // Floor negative eigenvalues (rounding artifacts) so the result is PSD.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw NumericError("gp_posterior: eigendecomposition failed");
  if (eig.eigenvalues().minCoeff() < 0.0) {
    const Eigen::VectorXd floored = eig.eigenvalues().cwiseMax(0.0);
    cov = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
  }
}

Eigen::VectorXd gp_posterior_mean(const GpDataset& data, const GpHyperparams& hp,
                                  std::span<const double> queries) {
  check_dataset(data);
  if (queries.empty()) throw ArgumentError("gp_posterior_mean: no query points");
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index m = static_cast<Eigen::Index>(queries.size());
  const Eigen::Map<const Eigen::VectorXd> y(data.values.data(), n);
  const auto llt = factorize(kernel_matrix(data, hp), hp.sigma2);
  const Eigen::VectorXd alpha = llt.solve(y);
  Eigen::VectorXd mean(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      acc += gp_kernel(queries[static_cast<std::size_t>(i)],
                       data.points[static_cast<std::size_t>(j)], hp) * alpha[j];
    mean[i] = acc;
  }
  return mean;
}

double gp_thompson_pick(const GpDataset& data, const GpHyperparams& hp,
                        std::span<const double> candidates, Rng& rng) {
  if (candidates.empty()) throw ArgumentError("gp_thompson_pick: no candidates");
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  gp_posterior(data, hp, candidates, mean, cov);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw NumericError("gp_thompson_pick: eigendecomposition failed");
  const Eigen::VectorXd sqrt_vals = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();

  const Eigen::Index m = mean.size();
  Eigen::VectorXd z(m);
  for (Eigen::Index i = 0; i < m; ++i) z[i] = rng.normal();
  const Eigen::VectorXd sample = mean + eig.eigenvectors() * (sqrt_vals.asDiagonal() * z);

  // Argmin; exact ties break toward the candidate nearest zero.
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < m; ++i) {
    const double vi = sample[i];
    const double vb = sample[best];
    if (vi < vb || (vi == vb && std::abs(candidates[static_cast<std::size_t>(i)]) <
                                    std::abs(candidates[static_cast<std::size_t>(best)]))) {
      best = i;
    }
  }
  return candidates[static_cast<std::size_t>(best)];
}

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

GpDataset centered(const GpDataset& data, double& offset) {
  double mean = 0.0;
  for (double v : data.values) mean += v;
  mean /= static_cast<double>(data.size());
  offset = mean;
  GpDataset out = data;
  for (double& v : out.values) v -= mean;
  return out;
}

}  // namespace

LineBoResult line_bo(const Cost& cost, std::span<const double> theta,
                     std::span<const double> g_hat, double eta_max,
                     std::int64_t s_cost, Rng& rng, const LineBoSettings& settings) {
  if (theta.size() != g_hat.size()) throw ArgumentError("line_bo: theta/gradient size mismatch");
  if (!(eta_max > 0.0)) throw ArgumentError("line_bo: eta_max must be positive");
  if (s_cost < 1) throw ArgumentError("line_bo: need at least one shot per query");
  double gnorm2 = 0.0;
  for (double g : g_hat) gnorm2 += g * g;
  if (gnorm2 == 0.0) throw ArgumentError("line_bo: zero gradient direction");

  LineBoResult result;
  std::vector<double> probe(theta.begin(), theta.end());
  auto query = [&](double eta) {
    for (std::size_t i = 0; i < probe.size(); ++i) probe[i] = theta[i] - eta * g_hat[i];
    const CostQuery q = cost.noisy_query(probe, s_cost, rng);
    result.dataset.add(eta, q.value);
    result.shots_used += q.shots_used;
  };

  // Initial design: the current point first, then uniform exploration.
  query(0.0);
  for (int i = 1; i < settings.init_queries; ++i) query(rng.uniform(-eta_max, eta_max));

  // Thompson-guided refinement, refitting hyperparameters every round.
  const std::vector<double> grid = linspace(-eta_max, eta_max, settings.thompson_grid);
  for (int round = 0; round < settings.refine_rounds; ++round) {
    double offset = 0.0;
    const GpDataset fit_data = centered(result.dataset, offset);
    const GpHyperparams hp = gp_fit_hyperparams(fit_data, rng, settings.bounds, settings.restarts);
    query(gp_thompson_pick(fit_data, hp, grid, rng));
  }

  // Final fit; the step size is the predictive-mean argmin on a fine grid.
  double offset = 0.0;
  const GpDataset fit_data = centered(result.dataset, offset);
  const GpHyperparams hp = gp_fit_hyperparams(fit_data, rng, settings.bounds, settings.restarts);
  const std::vector<double> fine = linspace(-eta_max, eta_max, settings.mean_grid);
  const Eigen::VectorXd mean = gp_posterior_mean(fit_data, hp, fine);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < mean.size(); ++i) {
    if (mean[i] < mean[best] ||
        (mean[i] == mean[best] && std::abs(fine[static_cast<std::size_t>(i)]) <
                                      std::abs(fine[static_cast<std::size_t>(best)]))) {
      best = i;
    }
  }
  result.eta_star = fine[static_cast<std::size_t>(best)];
  result.next_point.assign(theta.begin(), theta.end());
  for (std::size_t i = 0; i < result.next_point.size(); ++i)
    result.next_point[i] -= result.eta_star * g_hat[i];
  return result;
}

}  // namespace sglbo
