#pragma once

// Adaptive Dormand-Prince 5(4) integrator for autonomous systems y' = f(y).

#include <cstddef>
#include <functional>

#include <Eigen/Core>

namespace sdenet {

struct IntegratorConfig {
  double rtol = 1e-10;
  double atol = 1e-12;
  // 0 picks a starting step from the initial derivative.
  double initial_step = 0.0;
  double min_step = 1e-14;
  std::size_t max_steps = 1'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

using OdeRhs = std::function<void(const Eigen::VectorXd& y, Eigen::VectorXd& dydt)>;

// Advances y from 0 to t in place; throws SolverError when the step size
// underflows or the step budget runs out.
IntegratorStats integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXd& y, double t,
                                 const IntegratorConfig& cfg = {});

}  // namespace sdenet
