#pragma once

#include <functional>

#include <Eigen/Dense>

namespace hk {

struct NewtonOptions {
  int max_iterations = 100;
  int max_halvings = 30;
  double residual_tol = 1e-10;  // max-norm of F
  double step_tol = 1e-12;      // max-norm of the next Newton correction
};

struct NewtonResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double residual = 0.0;  // max-norm of F at x
};

/// Fills F(x) and its Jacobian J(x).
using NonlinearSystem =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& residual, Eigen::MatrixXd& jacobian)>;

/// Trial points for which this returns false are rejected by the line search.
using AdmissibleRegion = std::function<bool(const Eigen::VectorXd& x)>;

/// Newton's method with step halving on the Euclidean residual norm, for
/// small dense systems. Converged when ||F||_inf <= residual_tol and the
/// Newton correction at that point is <= step_tol; the correction is then not
/// applied, so a start that already solves the system returns after 0
/// iterations. Throws NoConvergence when the iteration budget is exhausted, the
/// Jacobian is singular or non-finite, or no halving yields descent.
NewtonResult damped_newton(const NonlinearSystem& system, Eigen::VectorXd start,
                           const NewtonOptions& options = {},
                           const AdmissibleRegion& admissible = {});

}  // namespace hk
