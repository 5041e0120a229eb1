#pragma once

// Conventional comparison path: sample (x0, moment) pairs from the dual
// solver and fit the same SigmoidNet architecture by mini-batch gradient
// descent on the mean squared error.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdenet/dual_solver.hpp"
#include "sdenet/taylor_net.hpp"

namespace sdenet {

// Axis-aligned box [lo_i, hi_i].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const noexcept { return lo.size(); }
  bool contains(std::span<const double> x) const;
  // The same interval on every axis.
  static Box cube(std::size_t dim, double lo, double hi);
};

struct Dataset {
  Eigen::MatrixXd inputs;  // size x D
  Eigen::VectorXd targets;
  Box region;
  std::uint64_t generator_fingerprint = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(targets.size()); }
};

Dataset generate_dataset(const DualCoefficients& coeffs, const Box& region, std::size_t size,
                         std::uint64_t seed, unsigned threads = 0);

// x_1,...,x_D,target
std::string dataset_to_csv(const Dataset& data);

enum class TrainOptimizer { Adam, AdaDelta };

struct TrainConfig {
  int epochs = 50;
  std::size_t batch_size = 256;
  TrainOptimizer optimizer = TrainOptimizer::Adam;
  // Adam: step size. AdaDelta: multiplier on the update (1 = classic).
  double learning_rate = 1e-2;
  // Learning rate multiplied by this factor after every epoch.
  double lr_decay = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double rho = 0.9;  // AdaDelta
  double epsilon = 1e-8;
  double init_lo = -1.0;
  double init_hi = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  SigmoidNet net;
  // Full-dataset MSE after each epoch.
  std::vector<double> epoch_loss;
};

double dataset_mse(const SigmoidNet& net, const Dataset& data);

TrainResult train_backprop(const Dataset& data, std::size_t hidden, const TrainConfig& cfg);

}  // namespace sdenet
