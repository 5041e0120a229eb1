#include "sdenet/fitter.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "sdenet/detail/parallel.hpp"
#include "sdenet/errors.hpp"
#include "sdenet/random.hpp"

namespace sdenet {

void FitConfig::validate() const {
  if (hidden < 1) throw InvalidArgument("FitConfig: hidden must be >= 1");
  if (order < 0) throw InvalidArgument("FitConfig: order must be >= 0");
  if (restarts < 1) throw InvalidArgument("FitConfig: restarts must be >= 1");
  if (!(init_lo < init_hi)) throw InvalidArgument("FitConfig: empty initialization range");
  if (max_iterations < 0) throw InvalidArgument("FitConfig: max_iterations must be >= 0");
  if (!(gradient_tolerance > 0) || !(cost_tolerance > 0)) {
    throw InvalidArgument("FitConfig: tolerances must be > 0");
  }
  if (!(initial_damping > 0) || !(damping_increase > 1) || !(damping_decrease > 1)) {
    throw InvalidArgument("FitConfig: invalid damping schedule");
  }
  if (!(bias_bound >= 0)) throw InvalidArgument("FitConfig: bias_bound must be >= 0");
}

namespace {

// Target P(l, t) gathered over the total-degree set of `basis`.
Eigen::VectorXd gather_target(const DualCoefficients& target, const TaylorBasis& basis) {
  if (target.dim() != basis.dim()) {
    throw InvalidArgument("residuals: target dimension " + std::to_string(target.dim()) +
                          " does not match network dimension " + std::to_string(basis.dim()));
  }
  if (basis.order() > target.order()) {
    throw InvalidArgument("residuals: order " + std::to_string(basis.order()) +
                          " exceeds solved coefficient order " + std::to_string(target.order()));
  }
  const auto& set = *basis.index_set();
  Eigen::VectorXd out(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) out[static_cast<Eigen::Index>(i)] = target.value(set[i]);
  return out;
}

LocalFit run_lm(const Eigen::VectorXd& target, const TaylorBasis& basis, const SigmoidNet& start,
                const FitConfig& cfg) {
  const std::size_t hidden = start.hidden();
  const std::size_t dim = start.dim();
  Eigen::VectorXd theta = start.parameters();
  SigmoidNet net = start;

  Eigen::VectorXd r = target - basis.coefficients(net).values;
  if (!r.allFinite()) throw FitError("fit: non-finite residuals at the starting point");
  double cost = r.squaredNorm();

  LocalFit out{net, cost, 0.0, 0, false, {cost}};
  double lambda = cfg.initial_damping;
  Eigen::MatrixXd jac = basis.jacobian(net);
  Eigen::VectorXd grad = jac.transpose() * r;
  Eigen::MatrixXd jtj = jac.transpose() * jac;

  int it = 0;
  while (it < cfg.max_iterations) {
    if (grad.lpNorm<Eigen::Infinity>() <= cfg.gradient_tolerance || cost == 0.0) break;
    ++it;
    Eigen::MatrixXd lhs = jtj;
    for (Eigen::Index j = 0; j < lhs.rows(); ++j) {
      lhs(j, j) += lambda * std::max(jtj(j, j), 1e-12);
    }
    const Eigen::VectorXd step = lhs.ldlt().solve(grad);
    Eigen::VectorXd trial_theta = theta + step;
    if (cfg.bias_bound > 0.0) {
      auto bias = trial_theta.tail(static_cast<Eigen::Index>(hidden));
      bias = bias.cwiseMax(-cfg.bias_bound).cwiseMin(cfg.bias_bound);
    }
    bool accepted = false;
    double trial_cost = std::numeric_limits<double>::infinity();
    Eigen::VectorXd trial_r;
    if (step.allFinite() && trial_theta.allFinite()) {
      SigmoidNet trial = SigmoidNet::from_parameters(hidden, dim, trial_theta);
      trial_r = target - basis.coefficients(trial).values;
      if (trial_r.allFinite()) {
        trial_cost = trial_r.squaredNorm();
        if (trial_cost < cost) {
          accepted = true;
          net = std::move(trial);
        }
      }
    }
    if (accepted) {
      const double reduction = (cost - trial_cost) / cost;
      theta = trial_theta;
      r = std::move(trial_r);
      cost = trial_cost;
      out.accepted_costs.push_back(cost);
      lambda = std::max(lambda / cfg.damping_decrease, 1e-20);
      jac = basis.jacobian(net);
      grad = jac.transpose() * r;
      jtj = jac.transpose() * jac;
      if (reduction < cfg.cost_tolerance) break;
    } else {
      lambda *= cfg.damping_increase;
      if (lambda > cfg.max_damping) break;
    }
  }

  out.net = std::move(net);
  out.cost = cost;
  out.gradient_norm = grad.lpNorm<Eigen::Infinity>();
  out.iterations = it;
  out.converged = out.gradient_norm <= cfg.gradient_tolerance;
  return out;
}

}  // namespace

Eigen::VectorXd residuals(const DualCoefficients& target, const SigmoidNet& net, int order) {
  const TaylorBasis basis(net.dim(), order);
  return gather_target(target, basis) - basis.coefficients(net).values;
}

double coefficient_cost(const DualCoefficients& target, const SigmoidNet& net, int order) {
  return residuals(target, net, order).squaredNorm();
}

SigmoidNet random_net(std::size_t hidden, std::size_t dim, double lo, double hi,
                      std::uint64_t seed, std::uint64_t restart) {
  auto rng = make_stream(seed, restart);
  Eigen::VectorXd theta(static_cast<Eigen::Index>(hidden * (dim + 2)));
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = uniform(rng, lo, hi);
  return SigmoidNet::from_parameters(hidden, dim, theta);
}

LocalFit levenberg_marquardt(const DualCoefficients& target, const SigmoidNet& start,
                             const FitConfig& cfg) {
  cfg.validate();
  const TaylorBasis basis(start.dim(), cfg.order);
  return run_lm(gather_target(target, basis), basis, start, cfg);
}

FitResult fit_network(const DualCoefficients& target, const FitConfig& cfg) {
  cfg.validate();
  const TaylorBasis basis(target.dim(), cfg.order);
  const Eigen::VectorXd goal = gather_target(target, basis);

  const auto count = static_cast<std::size_t>(cfg.restarts);
  std::vector<std::optional<LocalFit>> fits(count);
  detail::parallel_for(count, detail::resolve_threads(cfg.threads), [&](std::size_t k) {
    const SigmoidNet start =
        random_net(cfg.hidden, target.dim(), cfg.init_lo, cfg.init_hi, cfg.seed, k);
    fits[k] = run_lm(goal, basis, start, cfg);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < count; ++k) {
    if (fits[k]->cost < fits[best]->cost) best = k;
  }
  FitResult result{fits[best]->net, fits[best]->cost, fits[best]->gradient_norm, {}, best,
                   fits[best]->iterations, fits[best]->converged, cfg.seed};
  for (const auto& f : fits) result.restarts.push_back({f->cost, f->iterations, f->converged});
  return result;
}

}  // namespace sdenet
