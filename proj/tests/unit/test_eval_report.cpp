#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sdenet/dual_solver.hpp"
#include "sdenet/errors.hpp"
#include "sdenet/eval_report.hpp"

using namespace sdenet;

namespace {

double smooth(std::span<const double> x) { return std::sin(x[0]) + 0.3 * x[1] * x[1] - x[0] * x[1]; }
double other(std::span<const double> x) { return std::cos(x[1]) + 0.1 * x[0]; }

// The same function seen in coordinates rotated by a quarter turn.
double rotated(double (*f)(std::span<const double>), std::span<const double> x) {
  const double y[2] = {-x[1], x[0]};
  return f(std::span<const double>(y, 2));
}

}  // namespace

TEST_CASE("analytic OU moments") {
  CHECK(analytic_ou_moment(1, 1, 1, 1, 1) == doctest::Approx(0.3678794).epsilon(1e-7));
  CHECK(analytic_ou_moment(1, 1, 0, 1, 2) == doctest::Approx(0.4323324).epsilon(1e-7));
  CHECK(analytic_ou_moment(2.5, 0.3, 1.7, 0.0, 1) == 1.7);
  CHECK(analytic_ou_moment(2.5, 0.3, 1.7, 0.0, 2) == doctest::Approx(1.7 * 1.7).epsilon(1e-15));
  CHECK(analytic_ou_moment(0.5, 2.0, -1.0, 3.0, 2) ==
        doctest::Approx(std::exp(-3.0) + 4.0 * (1 - std::exp(-3.0))).epsilon(1e-14));
  CHECK_THROWS_AS(analytic_ou_moment(1, 1, 1, 1, 3), InvalidArgument);
  CHECK_THROWS_AS(analytic_ou_moment(1, 1, 1, 1, 0), InvalidArgument);
  CHECK_THROWS_AS(analytic_ou_moment(0, 1, 1, 1, 1), InvalidArgument);
}

TEST_CASE("grid examples") {
  const auto constant = grid_eval([](std::span<const double>) { return 2.5; }, -1, 1, -1, 1, 3, 4);
  REQUIRE(constant.size() == 12);
  for (const auto& p : constant) CHECK(p.value == 2.5);

  const auto x1 = grid_eval([](std::span<const double> x) { return x[0]; }, 0, 1, 0, 1, 2, 2);
  REQUIRE(x1.size() == 4);
  CHECK(x1[0].x1 == 0.0);
  CHECK(x1[0].x2 == 0.0);
  CHECK(x1[1].x2 == 1.0);
  CHECK(x1[3].x1 == 1.0);
  CHECK(x1[0].value == 0.0);
  CHECK(x1[1].value == 0.0);
  CHECK(x1[2].value == 1.0);
  CHECK(x1[3].value == 1.0);

  CHECK(grid_to_csv(x1) == "x1,x2,value\n0,0,0\n0,1,0\n1,0,1\n1,1,1\n");

  const auto fine = grid_eval(smooth, -4, 4, -4, 4, 101, 101);
  REQUIRE(fine.size() == 101 * 101);
  CHECK(fine.front().x1 == -4.0);
  CHECK(fine.back().x1 == 4.0);
  CHECK(fine.back().x2 == 4.0);
  CHECK(fine[101].x1 == doctest::Approx(-3.92));
  CHECK_THROWS_AS(grid_eval(smooth, 0, 1, 0, 1, 1, 3), InvalidArgument);
}

TEST_CASE("grid over a dual moment") {
  const auto vdp = builtin_model("vdp", {{"eps", 1.0}, {"nu11", 1.0}, {"nu22", 1.0}});
  const auto c = solve_moment(vdp, 10, 0, 1, 0.1);
  const auto grid =
      grid_eval([&](std::span<const double> x) { return eval_moment(c, x); }, -4, 4, -4, 4, 5, 5);
  for (const auto& p : grid) {
    const double x[2] = {p.x1, p.x2};
    CHECK(p.value == eval_moment(c, x));
  }
}

TEST_CASE("line scan") {
  const auto line = line_eval([](std::span<const double> x) { return 2 * x[0]; },
                              [](std::span<const double> x) { return x[0]; }, -1, 1, 3);
  REQUIRE(line.size() == 3);
  CHECK(line[0].x == -1.0);
  CHECK(line[1].x == 0.0);
  CHECK(line[2].prediction == 2.0);
  CHECK(line[2].reference == 1.0);
  CHECK(line_to_csv(line, true) == "x,prediction,reference\n-1,-2,-1\n0,0,0\n1,2,1\n");
  CHECK(line_to_csv(line, false) == "x,prediction\n-1,-2\n0,0\n1,2\n");
}

TEST_CASE("radial profile of identical functions is zero") {
  const auto p = radial_error_profile(smooth, smooth, 4.0, 100, 100);
  REQUIRE(p.mse.size() == 100);
  for (double m : p.mse) CHECK(m == 0.0);
  CHECK(p.radial_count == 100);
  CHECK(p.angular_count == 100);
  CHECK(p.band_lo.front() == 0.0);
  CHECK(p.band_hi.back() == 4.0);
  for (std::size_t b = 1; b < p.mse.size(); ++b) CHECK(p.band_lo[b] == p.band_hi[b - 1]);
}

TEST_CASE("constant offset gives delta squared") {
  const double delta = 0.125;
  const auto p = radial_error_profile([&](std::span<const double> x) { return smooth(x) + delta; },
                                      smooth, 4.0, 20, 16);
  for (double m : p.mse) CHECK(m == doctest::Approx(delta * delta).epsilon(1e-12));
  CHECK(p.mean_mse(0, 4) == doctest::Approx(delta * delta).epsilon(1e-12));
}

TEST_CASE("profile symmetry, scaling and rotation") {
  const auto ab = radial_error_profile(smooth, other, 4.0, 30, 100);
  const auto ba = radial_error_profile(other, smooth, 4.0, 30, 100);
  CHECK(ab.mse == ba.mse);

  const double alpha = -3.0;
  const auto scaled = radial_error_profile([&](std::span<const double> x) { return alpha * smooth(x); },
                                           [&](std::span<const double> x) { return alpha * other(x); },
                                           4.0, 30, 100);
  for (std::size_t b = 0; b < ab.mse.size(); ++b) {
    CHECK(scaled.mse[b] == doctest::Approx(alpha * alpha * ab.mse[b]).epsilon(1e-12));
  }

  const auto turned = radial_error_profile([](std::span<const double> x) { return rotated(smooth, x); },
                                           [](std::span<const double> x) { return rotated(other, x); },
                                           4.0, 30, 100);
  for (std::size_t b = 0; b < ab.mse.size(); ++b) {
    CHECK(turned.mse[b] == doctest::Approx(ab.mse[b]).epsilon(1e-10));
  }
}

TEST_CASE("band grouping and mean_mse") {
  // error grows like r^2, so the ring MSE is r^4
  auto err = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  auto zero = [](std::span<const double>) { return 0.0; };
  const auto rings = radial_error_profile(err, zero, 4.0, 8, 12);
  for (std::size_t k = 0; k < 8; ++k) {
    const double r = (k + 0.5) * 0.5;
    CHECK(rings.mse[k] == doctest::Approx(std::pow(r, 4)).epsilon(1e-12));
  }
  const auto grouped = radial_error_profile(err, zero, 4.0, 8, 12, 2);
  REQUIRE(grouped.mse.size() == 2);
  CHECK(grouped.band_hi[0] == 2.0);
  double first = 0.0;
  for (std::size_t k = 0; k < 4; ++k) first += rings.mse[k] / 4;
  CHECK(grouped.mse[0] == doctest::Approx(first).epsilon(1e-12));
  CHECK(rings.mean_mse(0, 1) < rings.mean_mse(3, 4));
  CHECK(rings.mean_mse(0, 1) == doctest::Approx((std::pow(0.25, 4) + std::pow(0.75, 4)) / 2));

  CHECK(profile_to_csv(radial_error_profile(zero, zero, 2.0, 2, 4)) ==
        "r_lo,r_hi,mse\n0,1,0\n1,2,0\n");
  CHECK_THROWS_AS(radial_error_profile(err, zero, 4.0, 1, 12), InvalidArgument);
  CHECK_THROWS_AS(radial_error_profile(err, zero, 4.0, 8, 12, 9), InvalidArgument);
  CHECK_THROWS_AS(radial_error_profile(err, zero, 0.0, 8, 12), InvalidArgument);
}
