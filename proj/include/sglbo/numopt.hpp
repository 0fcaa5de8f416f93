#pragma once

#include <functional>

#include <Eigen/Dense>

namespace sglbo {

/// Objective callback: returns f(x) and, when `grad` is non-null, writes the
/// gradient. Line searches pass null to skip gradient work.
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct BfgsOptions {
  int max_iter = 200;
  double grad_tol = 1e-8;  // on the (projected) gradient's max norm
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// BFGS with Armijo backtracking. Deterministic; curvature updates are
/// skipped when s.y is not safely positive.
BfgsResult minimize_bfgs(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                         const BfgsOptions& options = {});

/// Projected (box-constrained) BFGS: iterates are clamped to [lo, hi] and
/// convergence is measured on the projected gradient.
BfgsResult minimize_bfgs_bounded(const ObjectiveFn& fg, const Eigen::VectorXd& x0,
                                 const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                 const BfgsOptions& options = {});

}  // namespace sglbo
