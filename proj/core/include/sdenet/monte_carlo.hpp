#pragma once

// Euler-Maruyama ensembles of dx = a(x) dt + B(x) dW with counter-based
// Gaussian increments: the increment of path j at step k depends only on
// (seed, j, k), so results do not depend on batching or thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdenet/sde_model.hpp"

namespace sdenet {

struct SimConfig {
  double dt = 1e-3;
  double t = 1.0;
  std::size_t paths = 100'000;
  std::uint64_t seed = 0;
  // 0: SDENET_THREADS or hardware concurrency.
  unsigned threads = 0;

  // Number of Euler steps; throws InvalidArgument if t/dt is not an integer.
  std::size_t steps() const;
};

struct TrajectoryEnsemble {
  Eigen::MatrixXd states;  // paths x D final states
  std::vector<std::uint8_t> diverged;
  SimConfig config;
  std::vector<double> x0;
  std::size_t first_path = 0;

  std::size_t paths() const noexcept { return static_cast<std::size_t>(states.rows()); }
  std::size_t diverged_count() const noexcept;
};

TrajectoryEnsemble simulate(const SdeModel& model, std::span<const double> x0,
                            const SimConfig& cfg);

// Paths [first, first + count) of the ensemble `cfg` describes.
TrajectoryEnsemble simulate_paths(const SdeModel& model, std::span<const double> x0,
                                  const SimConfig& cfg, std::size_t first, std::size_t count);

struct MomentEstimate {
  double estimate = 0.0;
  // Sample standard deviation over sqrt(used); NaN when fewer than 2 paths.
  double std_error = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

MomentEstimate mc_moment(const TrajectoryEnsemble& ens, std::size_t axis, int order);

// path,x_1,...,x_D
std::string ensemble_to_csv(const TrajectoryEnsemble& ens);

}  // namespace sdenet
