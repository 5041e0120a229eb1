#include "sdenet/eval_report.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "sdenet/errors.hpp"
#include "sdenet/io.hpp"

namespace sdenet {

double analytic_ou_moment(double gamma, double sigma, double x0, double t, int order) {
  if (!(gamma > 0)) throw InvalidArgument("analytic_ou_moment: gamma must be > 0");
  const double mean = x0 * std::exp(-gamma * t);
  switch (order) {
    case 1:
      return mean;
    case 2:
      return mean * mean + sigma * sigma / (2.0 * gamma) * (-std::expm1(-2.0 * gamma * t));
    default:
      throw InvalidArgument("analytic_ou_moment: order must be 1 or 2");
  }
}

std::vector<GridPoint> grid_eval(const Predictor& predictor, double lo1, double hi1, double lo2,
                                 double hi2, int n1, int n2) {
  if (n1 < 2 || n2 < 2) throw InvalidArgument("grid_eval: resolution must be >= 2 per axis");
  std::vector<GridPoint> out;
  out.reserve(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  for (int i = 0; i < n1; ++i) {
    const double x1 = i == n1 - 1 ? hi1 : lo1 + (hi1 - lo1) * i / (n1 - 1);
    for (int j = 0; j < n2; ++j) {
      const double x2 = j == n2 - 1 ? hi2 : lo2 + (hi2 - lo2) * j / (n2 - 1);
      const std::array<double, 2> x{x1, x2};
      out.push_back({x1, x2, predictor(x)});
    }
  }
  return out;
}

std::string grid_to_csv(const std::vector<GridPoint>& grid) {
  std::string out = "x1,x2,value\n";
  for (const auto& g : grid) {
    out += format_double(g.x1) + "," + format_double(g.x2) + "," + format_double(g.value) + "\n";
  }
  return out;
}

std::vector<LinePoint> line_eval(const Predictor& predictor, const Predictor& reference,
                                 double lo, double hi, int n) {
  if (n < 2) throw InvalidArgument("line_eval: need at least 2 points");
  std::vector<LinePoint> out;
  for (int i = 0; i < n; ++i) {
    const double x = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    const std::array<double, 1> xs{x};
    out.push_back({x, predictor(xs), reference ? reference(xs) : 0.0});
  }
  return out;
}

std::string line_to_csv(const std::vector<LinePoint>& line, bool with_reference) {
  std::string out = with_reference ? "x,prediction,reference\n" : "x,prediction\n";
  for (const auto& p : line) {
    out += format_double(p.x) + "," + format_double(p.prediction);
    if (with_reference) out += "," + format_double(p.reference);
    out += '\n';
  }
  return out;
}

double RadialErrorProfile::mean_mse(double r_lo, double r_hi) const {
  double sum = 0.0;
  int count = 0;
  for (std::size_t b = 0; b < mse.size(); ++b) {
    const double centre = 0.5 * (band_lo[b] + band_hi[b]);
    if (centre >= r_lo && centre <= r_hi) {
      sum += mse[b];
      ++count;
    }
  }
  if (count == 0) throw InvalidArgument("RadialErrorProfile::mean_mse: no band in range");
  return sum / count;
}

RadialErrorProfile radial_error_profile(const Predictor& predictor, const Predictor& reference,
                                        double r_max, int n_r, int n_theta, int bands) {
  if (n_r < 2 || n_theta < 2) throw InvalidArgument("radial_error_profile: mesh must be >= 2x2");
  if (!(r_max > 0)) throw InvalidArgument("radial_error_profile: r_max must be > 0");
  if (bands == 0) bands = n_r;
  if (bands < 1 || bands > n_r) throw InvalidArgument("radial_error_profile: bad band count");

  RadialErrorProfile prof;
  prof.radial_count = n_r;
  prof.angular_count = n_theta;
  prof.r_max = r_max;
  prof.mse.assign(static_cast<std::size_t>(bands), 0.0);
  std::vector<int> counts(static_cast<std::size_t>(bands), 0);
  for (int b = 0; b < bands; ++b) {
    prof.band_lo.push_back(r_max * b / bands);
    prof.band_hi.push_back(b == bands - 1 ? r_max : r_max * (b + 1) / bands);
  }
  const double spacing = r_max / n_r;
  for (int k = 0; k < n_r; ++k) {
    const double r = (k + 0.5) * spacing;
    const auto band = static_cast<std::size_t>(static_cast<long>(k) * bands / n_r);
    for (int j = 0; j < n_theta; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n_theta;
      const std::array<double, 2> x{r * std::cos(theta), r * std::sin(theta)};
      const double diff = predictor(x) - reference(x);
      prof.mse[band] += diff * diff;
      ++counts[band];
    }
  }
  for (std::size_t b = 0; b < prof.mse.size(); ++b) prof.mse[b] /= counts[b];
  return prof;
}

std::string profile_to_csv(const RadialErrorProfile& profile) {
  std::string out = "r_lo,r_hi,mse\n";
  for (std::size_t b = 0; b < profile.mse.size(); ++b) {
    out += format_double(profile.band_lo[b]) + "," + format_double(profile.band_hi[b]) + "," +
           format_double(profile.mse[b]) + "\n";
  }
  return out;
}

}  // namespace sdenet
