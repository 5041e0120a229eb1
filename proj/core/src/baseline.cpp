#include "sdenet/baseline.hpp"

#include <cmath>
#include <numeric>

#include "sdenet/detail/parallel.hpp"
#include "sdenet/errors.hpp"
#include "sdenet/fitter.hpp"
#include "sdenet/io.hpp"
#include "sdenet/random.hpp"

namespace sdenet {

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

Box Box::cube(std::size_t dim, double lo, double hi) {
  return Box{std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

Dataset generate_dataset(const DualCoefficients& coeffs, const Box& region, std::size_t size,
                         std::uint64_t seed, unsigned threads) {
  if (size == 0) throw InvalidArgument("generate_dataset: size must be > 0");
  const std::size_t d = coeffs.dim();
  if (region.dim() != d || region.hi.size() != d) {
    throw InvalidArgument("generate_dataset: region dimension mismatch");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(region.lo[i] <= region.hi[i])) throw InvalidArgument("generate_dataset: empty region");
  }
  Dataset data;
  data.inputs.resize(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(d));
  data.targets.resize(static_cast<Eigen::Index>(size));
  data.region = region;
  data.generator_fingerprint =
      fnv1a(std::span<const double>(coeffs.values.data(), static_cast<std::size_t>(coeffs.values.size())));

  auto rng = make_stream(seed, 0);
  for (Eigen::Index p = 0; p < data.inputs.rows(); ++p) {
    for (std::size_t i = 0; i < d; ++i) {
      const double u = half_open_unit(rng());
      // Clamp guards the hi end against rounding in lo + (hi - lo) * u.
      data.inputs(p, static_cast<Eigen::Index>(i)) =
          std::min(region.hi[i], region.lo[i] + (region.hi[i] - region.lo[i]) * u);
    }
  }
  detail::parallel_for(size, detail::resolve_threads(threads), [&](std::size_t p) {
    const auto row = static_cast<Eigen::Index>(p);
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = data.inputs(row, static_cast<Eigen::Index>(i));
    data.targets[row] = eval_moment(coeffs, x);
  });
  return data;
}

std::string dataset_to_csv(const Dataset& data) {
  const auto d = data.inputs.cols();
  std::string out;
  for (Eigen::Index i = 0; i < d; ++i) out += "x_" + std::to_string(i + 1) + ",";
  out += "target\n";
  for (Eigen::Index p = 0; p < data.inputs.rows(); ++p) {
    for (Eigen::Index i = 0; i < d; ++i) out += format_double(data.inputs(p, i)) + ",";
    out += format_double(data.targets[p]);
    out += '\n';
  }
  return out;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("TrainConfig: epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("TrainConfig: batch size must be >= 1");
  if (!(learning_rate > 0)) throw InvalidArgument("TrainConfig: learning rate must be > 0");
  if (!(lr_decay > 0)) throw InvalidArgument("TrainConfig: lr_decay must be > 0");
  if (!(init_lo < init_hi)) throw InvalidArgument("TrainConfig: empty initialization range");
}

double dataset_mse(const SigmoidNet& net, const Dataset& data) {
  const auto d = static_cast<std::size_t>(data.inputs.cols());
  std::vector<double> x(d);
  double sum = 0.0;
  for (Eigen::Index p = 0; p < data.inputs.rows(); ++p) {
    for (std::size_t i = 0; i < d; ++i) x[i] = data.inputs(p, static_cast<Eigen::Index>(i));
    const double e = forward(net, x) - data.targets[p];
    sum += e * e;
  }
  return sum / static_cast<double>(data.size());
}

TrainResult train_backprop(const Dataset& data, std::size_t hidden, const TrainConfig& cfg) {
  cfg.validate();
  if (data.size() == 0) throw InvalidArgument("train_backprop: empty dataset");
  if (hidden < 1) throw InvalidArgument("train_backprop: hidden must be >= 1");
  const auto d = static_cast<std::size_t>(data.inputs.cols());
  const auto n = static_cast<Eigen::Index>(hidden);
  const auto dd = static_cast<Eigen::Index>(d);

  SigmoidNet init = random_net(hidden, d, cfg.init_lo, cfg.init_hi, cfg.seed, 0);
  Eigen::VectorXd theta = init.parameters();
  const Eigen::Index np = theta.size();
  Eigen::VectorXd grad(np), m1 = Eigen::VectorXd::Zero(np), m2 = Eigen::VectorXd::Zero(np);
  Eigen::VectorXd z(n), sig(n);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto shuffle_rng = make_stream(cfg.seed, 1);

  TrainResult result{init, {}};
  double lr = cfg.learning_rate;
  long step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[shuffle_rng() % (i + 1)]);
    }
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double scale = 2.0 / static_cast<double>(stop - start);
      grad.setZero();
      for (std::size_t b = start; b < stop; ++b) {
        const auto p = static_cast<Eigen::Index>(order[b]);
        double y = 0.0;
        for (Eigen::Index h = 0; h < n; ++h) {
          double zz = theta[np - n + h];
          for (Eigen::Index j = 0; j < dd; ++j) zz += theta[n + h * dd + j] * data.inputs(p, j);
          z[h] = zz;
          sig[h] = sigmoid(zz);
          y += theta[h] * sig[h];
        }
        const double err = scale * (y - data.targets[p]);
        for (Eigen::Index h = 0; h < n; ++h) {
          const double back = err * theta[h] * sig[h] * (1.0 - sig[h]);
          grad[h] += err * sig[h];
          for (Eigen::Index j = 0; j < dd; ++j) grad[n + h * dd + j] += back * data.inputs(p, j);
          grad[np - n + h] += back;
        }
      }
      ++step;
      if (cfg.optimizer == TrainOptimizer::Adam) {
        m1 = cfg.beta1 * m1 + (1.0 - cfg.beta1) * grad;
        m2 = cfg.beta2 * m2 + (1.0 - cfg.beta2) * grad.cwiseAbs2();
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        theta.array() -= lr * (m1.array() / c1) / ((m2.array() / c2).sqrt() + cfg.epsilon);
      } else {
        // m2: running E[g^2], m1: running E[dx^2].
        m2 = cfg.rho * m2 + (1.0 - cfg.rho) * grad.cwiseAbs2();
        const Eigen::ArrayXd delta =
            -((m1.array() + cfg.epsilon).sqrt() / (m2.array() + cfg.epsilon).sqrt()) * grad.array();
        m1 = cfg.rho * m1.array() + (1.0 - cfg.rho) * delta.square();
        theta.array() += lr * delta;
      }
    }
    lr *= cfg.lr_decay;
    if (!theta.allFinite()) throw TrainingError("train_backprop: non-finite weights", epoch);
    SigmoidNet net = SigmoidNet::from_parameters(hidden, d, theta);
    const double loss = dataset_mse(net, data);
    if (!std::isfinite(loss)) throw TrainingError("train_backprop: non-finite loss", epoch);
    result.epoch_loss.push_back(loss);
    result.net = std::move(net);
  }
  return result;
}

}  // namespace sdenet
