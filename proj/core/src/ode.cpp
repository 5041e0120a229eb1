#include "sdenet/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdenet/errors.hpp"

namespace sdenet {

namespace {

// Dormand & Prince (1980) tableau, FSAL form.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b_hat (embedded 4th-order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

static_assert(c2 > 0 && c3 > 0 && c4 > 0 && c5 > 0);

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, const IntegratorConfig& cfg) {
  if (err.size() == 0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = cfg.atol + cfg.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

IntegratorStats integrate_dopri5(const OdeRhs& rhs, Eigen::VectorXd& y, double t,
                                 const IntegratorConfig& cfg) {
  IntegratorStats stats;
  if (t < 0.0) throw SolverError("integrate_dopri5: negative horizon", 0.0, 0.0);
  if (t == 0.0 || y.size() == 0) return stats;

  const Eigen::Index n = y.size();
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  rhs(y, k1);
  ++stats.rhs_evaluations;

  double h = cfg.initial_step;
  if (h <= 0.0) {
    // Hairer-Norsett-Wanner starting step heuristic (first-order part).
    const Eigen::VectorXd scale =
        (cfg.atol + cfg.rtol * y.array().abs()).matrix();
    const double d0 = (y.array() / scale.array()).matrix().norm() / std::sqrt(double(n));
    const double d1 = (k1.array() / scale.array()).matrix().norm() / std::sqrt(double(n));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, t);
  }

  constexpr double safety = 0.9, min_factor = 0.2, max_factor = 10.0;
  double time = 0.0;
  bool last_rejected = false;
  while (time < t) {
    if (stats.accepted + stats.rejected >= cfg.max_steps) {
      throw SolverError("integrate_dopri5: step budget exhausted at t=" + std::to_string(time),
                        time, h);
    }
    if (h < cfg.min_step) {
      throw SolverError("integrate_dopri5: step size underflow at t=" + std::to_string(time),
                        time, h);
    }
    const bool final_step = time + h >= t;
    if (final_step) h = t - time;

    ytmp = y + h * a21 * k1;
    rhs(ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(ynew, k7);
    stats.rhs_evaluations += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, ynew, cfg);
    if (!std::isfinite(en)) {
      throw SolverError("integrate_dopri5: non-finite state at t=" + std::to_string(time), time,
                        h);
    }

    if (en <= 1.0) {
      time = final_step ? t : time + h;
      y.swap(ynew);
      k1.swap(k7);
      ++stats.accepted;
      double factor = en == 0.0 ? max_factor : safety * std::pow(en, -0.2);
      factor = std::clamp(factor, min_factor, last_rejected ? 1.0 : max_factor);
      h *= factor;
      last_rejected = false;
    } else {
      ++stats.rejected;
      h *= std::max(min_factor, safety * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace sdenet
