#include "sdenet/monte_carlo.hpp"

#include <cmath>

#include "sdenet/detail/parallel.hpp"
#include "sdenet/errors.hpp"
#include "sdenet/io.hpp"
#include "sdenet/random.hpp"

namespace sdenet {

std::size_t SimConfig::steps() const {
  if (!(dt > 0.0)) throw InvalidArgument("SimConfig: dt must be > 0");
  if (!(t >= 0.0)) throw InvalidArgument("SimConfig: horizon must be >= 0");
  const double ratio = t / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("SimConfig: horizon is not a whole number of steps");
  }
  return static_cast<std::size_t>(rounded);
}

std::size_t TrajectoryEnsemble::diverged_count() const noexcept {
  std::size_t n = 0;
  for (auto f : diverged) n += f;
  return n;
}

namespace {

// Flat term list for fast repeated evaluation.
struct FlatPoly {
  std::vector<double> coef;
  std::vector<int> powers;  // terms x D
  std::size_t dim = 0;

  explicit FlatPoly(const Polynomial& p) : dim(p.dim()) {
    for (const auto& [n, c] : p.terms()) {
      coef.push_back(c);
      powers.insert(powers.end(), n.exponents().begin(), n.exponents().end());
    }
  }

  bool empty() const noexcept { return coef.empty(); }

  double operator()(const double* x) const noexcept {
    double sum = 0.0;
    for (std::size_t t = 0; t < coef.size(); ++t) {
      double v = coef[t];
      const int* e = powers.data() + t * dim;
      for (std::size_t i = 0; i < dim; ++i) {
        for (int k = 0; k < e[i]; ++k) v *= x[i];
      }
      sum += v;
    }
    return sum;
  }
};

}  // namespace

TrajectoryEnsemble simulate_paths(const SdeModel& model, std::span<const double> x0,
                                  const SimConfig& cfg, std::size_t first, std::size_t count) {
  const std::size_t d = model.dim();
  if (x0.size() != d) throw InvalidArgument("simulate: x0 dimension mismatch");
  if (cfg.paths == 0) throw InvalidArgument("simulate: paths must be >= 1");
  const std::size_t steps = cfg.steps();
  if (steps > 0xffffffffULL) throw InvalidArgument("simulate: too many steps");

  std::vector<FlatPoly> drift;
  for (const auto& p : model.drift()) drift.emplace_back(p);
  std::vector<FlatPoly> diffusion;
  std::vector<std::size_t> nonzero;  // flat (i * d + j) entries of B
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      diffusion.emplace_back(model.diffusion(i, j));
      if (!diffusion.back().empty()) nonzero.push_back(i * d + j);
    }
  }

  TrajectoryEnsemble ens;
  ens.states.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(d));
  ens.diverged.assign(count, 0);
  ens.config = cfg;
  ens.x0.assign(x0.begin(), x0.end());
  ens.first_path = first;

  const double sqrt_dt = std::sqrt(cfg.dt);
  const std::size_t blocks = (d + 1) / 2;
  detail::parallel_for(count, detail::resolve_threads(cfg.threads), [&](std::size_t local) {
    const std::uint64_t path = first + local;
    std::vector<double> x(x0.begin(), x0.end()), dx(d), xi(2 * blocks);
    bool ok = true;
    for (std::size_t k = 0; k < steps && ok; ++k) {
      for (std::size_t b = 0; b < blocks; ++b) {
        const auto pair = philox_normal_pair(cfg.seed, path, static_cast<std::uint32_t>(k),
                                             static_cast<std::uint32_t>(b));
        xi[2 * b] = pair[0];
        xi[2 * b + 1] = pair[1];
      }
      for (std::size_t i = 0; i < d; ++i) dx[i] = drift[i](x.data()) * cfg.dt;
      for (std::size_t flat : nonzero) {
        const std::size_t i = flat / d, j = flat % d;
        dx[i] += diffusion[flat](x.data()) * sqrt_dt * xi[j];
      }
      for (std::size_t i = 0; i < d; ++i) {
        x[i] += dx[i];
        if (!std::isfinite(x[i])) ok = false;
      }
    }
    const auto row = static_cast<Eigen::Index>(local);
    for (std::size_t i = 0; i < d; ++i) ens.states(row, static_cast<Eigen::Index>(i)) = x[i];
    ens.diverged[local] = ok ? 0 : 1;
  });
  return ens;
}

TrajectoryEnsemble simulate(const SdeModel& model, std::span<const double> x0,
                            const SimConfig& cfg) {
  return simulate_paths(model, x0, cfg, 0, cfg.paths);
}

MomentEstimate mc_moment(const TrajectoryEnsemble& ens, std::size_t axis, int order) {
  if (axis >= static_cast<std::size_t>(ens.states.cols())) {
    throw InvalidArgument("mc_moment: axis out of range");
  }
  if (order < 0) throw InvalidArgument("mc_moment: order must be >= 0");
  MomentEstimate out;
  out.excluded = ens.diverged_count();
  out.used = ens.paths() - out.excluded;
  if (out.used == 0) throw EstimationError("mc_moment: every path diverged");
  if (order == 0) {
    out.estimate = 1.0;
    out.std_error = 0.0;
    return out;
  }
  const auto col = static_cast<Eigen::Index>(axis);
  auto sample = [&](std::size_t p) {
    const double x = ens.states(static_cast<Eigen::Index>(p), col);
    double v = 1.0;
    for (int k = 0; k < order; ++k) v *= x;
    return v;
  };
  double sum = 0.0;
  for (std::size_t p = 0; p < ens.paths(); ++p) {
    if (!ens.diverged[p]) sum += sample(p);
  }
  const double n = static_cast<double>(out.used);
  out.estimate = sum / n;
  if (out.used < 2) {
    out.std_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double ss = 0.0;
  for (std::size_t p = 0; p < ens.paths(); ++p) {
    if (ens.diverged[p]) continue;
    const double dev = sample(p) - out.estimate;
    ss += dev * dev;
  }
  out.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

std::string ensemble_to_csv(const TrajectoryEnsemble& ens) {
  const auto d = ens.states.cols();
  std::string out = "path";
  for (Eigen::Index i = 0; i < d; ++i) out += ",x_" + std::to_string(i + 1);
  out += '\n';
  for (Eigen::Index p = 0; p < ens.states.rows(); ++p) {
    out += std::to_string(ens.first_path + static_cast<std::size_t>(p));
    for (Eigen::Index i = 0; i < d; ++i) out += "," + format_double(ens.states(p, i));
    out += '\n';
  }
  return out;
}

}  // namespace sdenet
