#include "sglbo/numopt.hpp"

#include <cmath>
#include <limits>

#include "sglbo/errors.hpp"

namespace sglbo {

namespace {

constexpr double kArmijoC1 = 1e-4;
constexpr int kMaxBacktracks = 40;

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                      const Eigen::VectorXd& hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

/// Gradient with components pointing out of the box at active bounds zeroed;
/// its norm is the box-constrained first-order optimality measure.
double projected_grad_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                           const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  double norm = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double gi = g[i];
    if (x[i] <= lo[i] && gi > 0.0) gi = 0.0;
    if (x[i] >= hi[i] && gi < 0.0) gi = 0.0;
    norm = std::max(norm, std::abs(gi));
  }
  return norm;
}

BfgsResult run_bfgs(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                    const Eigen::VectorXd* lo, const Eigen::VectorXd* hi,
                    const BfgsOptions& options) {
  const Eigen::Index n = x0.size();
  if (n == 0) throw ArgumentError("minimize_bfgs: empty start point");

  Eigen::VectorXd x = lo ? clamp(x0, *lo, *hi) : x0;
  Eigen::VectorXd g(n);
  double f = fg(x, &g);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);  // inverse Hessian approx

  BfgsResult result;
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const double gnorm = lo ? projected_grad_norm(x, g, *lo, *hi) : g.template lpNorm<Eigen::Infinity>();
    if (gnorm <= options.grad_tol) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd d = -(h * g);
    if (d.dot(g) >= -1e-12 * d.norm() * g.norm()) {
      // Not a descent direction: reset the curvature model.
      h.setIdentity();
      d = -g;
    }

    double t = 1.0;
    Eigen::VectorXd xn;
    double fn = f;
    bool progressed = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      xn = x + t * d;
      if (lo) xn = clamp(xn, *lo, *hi);
      const Eigen::VectorXd step = xn - x;
      if (step.squaredNorm() == 0.0) break;  // fully clipped
      fn = fg(xn, nullptr);
      if (std::isfinite(fn) && fn <= f + kArmijoC1 * g.dot(step)) {
        progressed = true;
        break;
      }
      t *= 0.5;
    }
    if (!progressed) break;  // stuck: line search exhausted

    Eigen::VectorXd gn(n);
    fn = fg(xn, &gn);
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd vh = h - rho * s * (y.transpose() * h);
      h = vh - (vh * y) * (rho * s.transpose()) + rho * s * s.transpose();
      // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, assembled in two steps
      h = 0.5 * (h + h.transpose());  // keep symmetric against drift
    }
    x = xn;
    g = gn;
    f = fn;
  }

  result.x = x;
  result.value = f;
  result.iterations = iter;
  return result;
}

}  // namespace

BfgsResult minimize_bfgs(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                         const BfgsOptions& options) {
  return run_bfgs(fg, x0, nullptr, nullptr, options);
}

BfgsResult minimize_bfgs_bounded(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                 const BfgsOptions& options) {
  if (lo.size() != x0.size() || hi.size() != x0.size())
    throw ArgumentError("minimize_bfgs_bounded: bound dimensions differ from x0");
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (!(lo[i] <= hi[i])) throw ArgumentError("minimize_bfgs_bounded: lo > hi");
  }
  return run_bfgs(fg, x0, &lo, &hi, options);
}

}  // namespace sglbo
