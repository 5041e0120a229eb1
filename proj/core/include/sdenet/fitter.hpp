#pragma once

// Embeds dual coefficients into a SigmoidNet by minimizing
//   C = sum_{|l| <= N} (P(l, t) - P_NN(l))^2
// with multi-start Levenberg-Marquardt.

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sdenet/dual_solver.hpp"
#include "sdenet/taylor_net.hpp"

namespace sdenet {

struct FitConfig {
  std::size_t hidden = 4;
  int order = 12;
  int restarts = 10;
  double init_lo = -1.0;
  double init_hi = 1.0;
  int max_iterations = 5000;
  // Infinity norm of J^T r.
  double gradient_tolerance = 1e-10;
  // Relative cost reduction below which an accepted step counts as stagnation.
  double cost_tolerance = 1e-15;
  double initial_damping = 1e-3;
  double damping_increase = 10.0;
  double damping_decrease = 10.0;
  double max_damping = 1e16;
  // Hidden biases are kept in [-bias_bound, bias_bound]; 0 disables.
  double bias_bound = 2.0;
  std::uint64_t seed = 0;
  // 0: SDENET_THREADS or hardware concurrency.
  unsigned threads = 1;

  void validate() const;
};

struct RestartOutcome {
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct FitResult {
  SigmoidNet net;
  double cost = 0.0;
  double gradient_norm = 0.0;
  std::vector<RestartOutcome> restarts;
  std::size_t best_restart = 0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
};

// P(l, t) - P_NN(l) over the total-degree set of the given order.
Eigen::VectorXd residuals(const DualCoefficients& target, const SigmoidNet& net, int order);

double coefficient_cost(const DualCoefficients& target, const SigmoidNet& net, int order);

FitResult fit_network(const DualCoefficients& target, const FitConfig& cfg);

// Result of a single LM run from a given start.
struct LocalFit {
  SigmoidNet net;
  double cost = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  // Cost after every accepted step, starting with the initial cost.
  std::vector<double> accepted_costs;
};

LocalFit levenberg_marquardt(const DualCoefficients& target, const SigmoidNet& start,
                             const FitConfig& cfg);

// Uniform [lo, hi) initial weights for restart `restart` under `seed`.
SigmoidNet random_net(std::size_t hidden, std::size_t dim, double lo, double hi,
                      std::uint64_t seed, std::uint64_t restart);

}  // namespace sdenet
