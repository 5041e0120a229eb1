#pragma once

// Reference values and evaluation geometry: analytic Ornstein-Uhlenbeck
// moments, Cartesian grids, line scans and radial error profiles.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sdenet {

using Predictor = std::function<double(std::span<const double>)>;

// M1 = x0 e^{-g t};  M2 = (x0 e^{-g t})^2 + sigma^2/(2 g) (1 - e^{-2 g t}).
double analytic_ou_moment(double gamma, double sigma, double x0, double t, int order);

struct GridPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double value = 0.0;
};

// n1 x n2 grid over [lo1, hi1] x [lo2, hi2] including the corners, x1 outer.
std::vector<GridPoint> grid_eval(const Predictor& predictor, double lo1, double hi1, double lo2,
                                 double hi2, int n1, int n2);
std::string grid_to_csv(const std::vector<GridPoint>& grid);

struct LinePoint {
  double x = 0.0;
  double prediction = 0.0;
  double reference = 0.0;
};

// n points over [lo, hi] for one-dimensional predictors; reference optional.
std::vector<LinePoint> line_eval(const Predictor& predictor, const Predictor& reference,
                                 double lo, double hi, int n);
std::string line_to_csv(const std::vector<LinePoint>& line, bool with_reference);

struct RadialErrorProfile {
  std::vector<double> band_lo;
  std::vector<double> band_hi;
  std::vector<double> mse;
  int radial_count = 0;
  int angular_count = 0;
  double r_max = 0.0;
  std::string predictor_label;
  std::string reference_label;

  // Mean of band MSEs whose centre lies in [r_lo, r_hi].
  double mean_mse(double r_lo, double r_hi) const;
};

// Polar mesh: radii (k + 1/2) r_max / n_r, angles 2 pi j / n_theta. Each ring
// is its own band when bands == 0; otherwise rings are grouped evenly.
RadialErrorProfile radial_error_profile(const Predictor& predictor, const Predictor& reference,
                                        double r_max, int n_r, int n_theta, int bands = 0);
std::string profile_to_csv(const RadialErrorProfile& profile);

}  // namespace sdenet
