#include "hk/damped_newton.hpp"

#include <string>

#include "hk/errors.hpp"

namespace hk {

NewtonResult damped_newton(const NonlinearSystem& system, Eigen::VectorXd start,
                           const NewtonOptions& options, const AdmissibleRegion& admissible) {
  const Eigen::Index n = start.size();
  Eigen::VectorXd x = std::move(start);
  Eigen::VectorXd f(n), trial_f(n);
  Eigen::MatrixXd jac(n, n), trial_jac(n, n);

  auto inside = [&](const Eigen::VectorXd& p) { return !admissible || admissible(p); };

  system(x, f, jac);
  for (int iteration = 0;; ++iteration) {
    if (!f.allFinite() || !jac.allFinite()) {
      throw NoConvergence("non-finite residual or Jacobian", iteration);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
    if (!lu.isInvertible()) throw NoConvergence("singular Jacobian", iteration);
    const Eigen::VectorXd step = lu.solve(-f);

    const double residual = f.lpNorm<Eigen::Infinity>();
    if (residual <= options.residual_tol && step.lpNorm<Eigen::Infinity>() <= options.step_tol) {
      return {x, iteration, residual};
    }
    if (iteration == options.max_iterations) {
      throw NoConvergence("no convergence after " + std::to_string(iteration) + " iterations",
                          iteration);
    }

    const double merit = f.norm();
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, t *= 0.5) {
      Eigen::VectorXd trial = x + t * step;
      if (!inside(trial)) continue;
      system(trial, trial_f, trial_jac);
      if (trial_f.allFinite() && trial_f.norm() < merit) {
        x = std::move(trial);
        f = trial_f;
        jac = trial_jac;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Residual already at round-off level; descent is no longer measurable.
      if (residual <= options.residual_tol) return {x, iteration, residual};
      throw NoConvergence("line search failed to reduce the residual", iteration);
    }
  }
}

}  // namespace hk
