// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fail. With a directory argument, the CSV artifacts
// of the first run are written there.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "sdenet/baseline.hpp"
#include "sdenet/dual_solver.hpp"
#include "sdenet/eval_report.hpp"
#include "sdenet/fitter.hpp"
#include "sdenet/io.hpp"
#include "sdenet/monte_carlo.hpp"
#include "sdenet/taylor_net.hpp"

using namespace sdenet;

namespace {

constexpr std::uint64_t kSeed = 1;

const SdeModel kOu = builtin_model("ou", {{"gamma", 1.0}, {"sigma", 1.0}});
const SdeModel kVdp = builtin_model("vdp", {{"eps", 1.0}, {"nu11", 1.0}, {"nu22", 1.0}});

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Named CSV outputs of one pipeline run.
using Artifacts = std::vector<std::pair<std::string, std::string>>;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
  const bool ok = v.pass && in_time;
  if (!ok) ++failures;
  std::printf("%s %2d %s: %s [%.3f s", ok ? "PASS" : "FAIL", id, title, v.detail.c_str(), secs);
  if (limit_seconds > 0) std::printf(", limit %g s%s", limit_seconds, in_time ? "" : " EXCEEDED");
  std::printf("]\n");
  std::fflush(stdout);
}

// 1, 2 ----------------------------------------------------------------------

Verdict ou_generator() {
  const auto g = build_generator(kOu, 12);
  const auto want = oracle::ou_recurrence(12, 1.0, 1.0);
  std::size_t mismatches = 0;
  for (int k = 0; k <= 12; ++k) {
    for (int n = 0; n <= 12; ++n) {
      auto it = want.find({k, n});
      if (g.at(MultiIndex{k}, MultiIndex{n}) != (it == want.end() ? 0.0 : it->second)) ++mismatches;
    }
  }
  const bool same_nnz = g.entries.nonZeros() == static_cast<Eigen::Index>(want.size());
  return {mismatches == 0 && same_nnz,
          std::to_string(mismatches) + " mismatches over 13x13 entries, " +
              std::to_string(g.entries.nonZeros()) + " non-zeros"};
}

Verdict vdp_generator() {
  const auto g = build_generator(kVdp, 17);
  const auto want = oracle::vdp_recurrence(17, 1.0, 1.0, 1.0);
  const auto& set = *g.index_set;
  std::size_t mismatches = 0;
  for (const auto& k : set) {
    for (const auto& n : set) {
      auto it = want.find({{k[0], k[1]}, {n[0], n[1]}});
      if (g.at(k, n) != (it == want.end() ? 0.0 : it->second)) ++mismatches;
    }
  }
  const bool same_nnz = g.entries.nonZeros() == static_cast<Eigen::Index>(want.size());
  return {mismatches == 0 && same_nnz && set.size() == 324,
          std::to_string(mismatches) + " mismatches over " + std::to_string(set.size()) + "^2 entries"};
}

// 3 -------------------------------------------------------------------------

Verdict ou_dual_vs_analytic() {
  double worst = 0.0;
  for (int m : {1, 2}) {
    const auto c = solve_moment(kOu, 12, 0, m, 1.0);
    for (double x0 : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const double err = std::abs(eval_moment(c, std::span(&x0, 1)) -
                                  analytic_ou_moment(1.0, 1.0, x0, 1.0, m));
      worst = std::max(worst, err);
    }
  }
  return {worst <= 1e-8, "max |dual - analytic| = " + fmt("%.3g", worst)};
}

// 4 -------------------------------------------------------------------------

Verdict vdp_dual_vs_mc(unsigned threads, Artifacts& out) {
  const std::vector<double> x0{1.0, 1.0};
  SimConfig sim;
  sim.dt = 1e-3;
  sim.t = 0.1;
  sim.paths = 100'000;
  sim.seed = kSeed;
  sim.threads = threads;
  const auto ens = simulate(kVdp, x0, sim);
  std::string csv = "axis,order,dual,mc,std_error,z\n";
  double worst = 0.0;
  for (std::size_t axis : {0u, 1u}) {
    for (int m : {1, 2}) {
      const auto c = solve_moment(kVdp, 17, axis, m, 0.1);
      const double dual = eval_moment(c, x0);
      const auto est = mc_moment(ens, axis, m);
      const double z = std::abs(dual - est.estimate) / est.std_error;
      worst = std::max(worst, z);
      csv += std::to_string(axis + 1) + "," + std::to_string(m) + "," + format_double(dual) + "," +
             format_double(est.estimate) + "," + format_double(est.std_error) + "," +
             format_double(z) + "\n";
    }
  }
  out.push_back({"vdp_dual_vs_mc.csv", csv});
  return {worst <= 4.0, "max |dual - mc| / se = " + fmt("%.3f", worst) + " over 4 moments"};
}

// 5 -------------------------------------------------------------------------

Verdict taylor_machinery() {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  double worst_coef = 0.0, worst_jac = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto hidden = static_cast<Eigen::Index>(1 + rng() % 4);
    const auto dim = static_cast<Eigen::Index>(1 + rng() % 2);
    const int order = static_cast<int>(1 + rng() % 5);
    Eigen::VectorXd q(hidden), s(hidden);
    Eigen::MatrixXd r(hidden, dim);
    for (Eigen::Index i = 0; i < hidden; ++i) {
      q[i] = w(rng);
      s[i] = w(rng);
      for (Eigen::Index j = 0; j < dim; ++j) r(i, j) = w(rng);
    }
    // Odd trials use s = 0, where the series is exactly the Taylor expansion of
    // forward. Otherwise the activation series is truncated at N in the bias
    // as well, so the reference is forward with a degree-N sigmoid.
    const bool zero_bias = trial % 2 == 1;
    if (zero_bias) s.setZero();
    const SigmoidNet net(q, r, s);
    const auto coeffs = network_taylor(net, order);
    auto f = [&](const std::vector<long double>& x) {
      return zero_bias ? oracle::forward_ld(q, r, s, x) : oracle::forward_truncated_ld(q, r, s, order, x);
    };
    std::vector<long double> fd(coeffs.index_set->size());
    long double scale = 0.0L;
    for (std::size_t i = 0; i < fd.size(); ++i) {
      const auto& l = (*coeffs.index_set)[i];
      fd[i] = oracle::taylor_fd(f, {l.exponents().begin(), l.exponents().end()});
      scale = std::max(scale, std::abs(fd[i]));
    }
    // exact zeros (even orders at s = 0) have no relative error; floor the
    // denominator at 1e-3 of the net's largest coefficient
    for (std::size_t i = 0; i < fd.size(); ++i) {
      const long double den = std::max(std::abs(fd[i]), 1e-3L * scale);
      worst_coef = std::max(worst_coef, static_cast<double>(
          std::abs(coeffs.values[static_cast<Eigen::Index>(i)] - fd[i]) / den));
    }

    const Eigen::MatrixXd jac = taylor_jacobian(net, order);
    const Eigen::MatrixXd jac_fd = oracle::fd_jacobian(
        [&](const Eigen::VectorXd& theta) {
          return network_taylor(SigmoidNet::from_parameters(net.hidden(), net.dim(), theta), order)
              .values;
        },
        net.parameters());
    const double rel = (jac - jac_fd).cwiseAbs().maxCoeff() / jac.cwiseAbs().maxCoeff();
    worst_jac = std::max(worst_jac, rel);
  }
  return {worst_coef < 1e-6 && worst_jac < 1e-6,
          "max relative error: coefficients " + fmt("%.2g", worst_coef) + ", Jacobian " +
              fmt("%.2g", worst_jac) + " over 100 nets"};
}

// 6 -------------------------------------------------------------------------

__extension__ typedef __int128 i128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Verdict sigmoid_table() {
  const auto table = sigmoid_derivatives(20);
  bool ok = table.order == 20 && table.exact.size() == 21 && table.values.size() == 21;
  int even_bad = 0;
  for (int k = 2; k <= 20; k += 2) {
    if (table.exact[static_cast<std::size_t>(k)].num != 0 || table.values[static_cast<std::size_t>(k)] != 0.0) {
      ++even_bad;
    }
  }
  double worst_fd = 0.0;
  for (int k = 1; k <= 7; k += 2) {
    const long double fd = oracle::sigmoid_derivative_fd(k);
    worst_fd = std::max(worst_fd, static_cast<double>(std::abs(table.values[static_cast<std::size_t>(k)] - fd) /
                                                      std::abs(fd)));
  }
  // sigma(x) = 1/2 + tanh(x/2)/2 gives sigma^(2n-1)(0) = (2^{2n} - 1) B_{2n} / (2n).
  const std::pair<long long, long long> bernoulli[] = {
      {1, 6}, {-1, 30}, {1, 42}, {-1, 30}, {5, 66}, {-691, 2730}, {7, 6}, {-3617, 510},
      {43867, 798}, {-174611, 330}};
  int odd_bad = 0;
  for (int n = 1; n <= 10; ++n) {
    const auto [bn, bd] = bernoulli[n - 1];
    i128 num = (((i128)1 << (2 * n)) - 1) * bn;
    i128 den = (i128)bd * 2 * n;
    const i128 g = gcd128(num, den);
    num /= g;
    den /= g;
    const auto& got = table.exact[static_cast<std::size_t>(2 * n - 1)];
    if (got.num != num || got.den != den) ++odd_bad;
  }
  ok = ok && even_bad == 0 && odd_bad == 0 && worst_fd < 1e-6;
  return {ok, std::to_string(even_bad) + " non-zero even entries, " + std::to_string(odd_bad) +
                  " odd entries off the Bernoulli values through k=19, finite-difference rel err " +
                  fmt("%.2g", worst_fd) + " for k<=7"};
}

// 7 -------------------------------------------------------------------------

Verdict ou_embedding(unsigned threads, Artifacts& out) {
  FitConfig cfg;
  cfg.hidden = 4;
  cfg.order = 12;
  cfg.restarts = 10;
  cfg.seed = kSeed;
  cfg.threads = threads;
  std::vector<SigmoidNet> nets;
  std::vector<double> costs;
  for (int m : {1, 2}) {
    const auto fit = fit_network(solve_moment(kOu, 12, 0, m, 1.0), cfg);
    nets.push_back(fit.net);
    costs.push_back(fit.cost);
    const Predictor pred = [net = fit.net](std::span<const double> x) { return forward(net, x); };
    const Predictor ref = [m](std::span<const double> x) {
      return analytic_ou_moment(1.0, 1.0, x[0], 1.0, m);
    };
    out.push_back({"ou_m" + std::to_string(m) + "_line.csv", line_to_csv(line_eval(pred, ref, -3, 3, 61), true)});
  }
  auto err = [&](int m, double x0) {
    return std::abs(forward(nets[static_cast<std::size_t>(m - 1)], std::span(&x0, 1)) -
                    analytic_ou_moment(1.0, 1.0, x0, 1.0, m));
  };
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i <= 400; ++i) worst1 = std::max(worst1, err(1, -2.0 + 0.01 * i));
  for (int i = 0; i <= 200; ++i) worst2 = std::max(worst2, err(2, -1.0 + 0.01 * i));
  const double at0 = err(2, 0.0), at3 = std::min(err(2, 3.0), err(2, -3.0));
  const bool ok = costs[0] < 1e-6 && worst1 < 0.01 && worst2 < 0.05 && at3 > at0;
  return {ok, "m=1 cost " + fmt("%.3g", costs[0]) + ", max err on [-2,2] " + fmt("%.3g", worst1) +
                  "; m=2 max err on |x0|<=1 " + fmt("%.3g", worst2) + ", err(0) " +
                  fmt("%.3g", at0) + " < min err(+-3) " + fmt("%.3g", at3)};
}

// 8, 9 ----------------------------------------------------------------------

DualCoefficients vdp_second_moment() { return solve_moment(kVdp, 17, 1, 2, 0.1); }

Predictor dual_predictor(const DualCoefficients& c) {
  return [&c](std::span<const double> x) { return eval_moment(c, x); };
}

Verdict vdp_near_origin(unsigned threads, Artifacts& out) {
  const auto c = vdp_second_moment();
  FitConfig cfg;
  cfg.hidden = 8;
  cfg.order = 17;
  cfg.restarts = 10;
  cfg.seed = kSeed;
  cfg.threads = threads;
  const auto fit = fit_network(c, cfg);
  const auto profile = radial_error_profile(
      [&](std::span<const double> x) { return forward(fit.net, x); }, dual_predictor(c), 4.0, 100, 100);
  out.push_back({"vdp_fit_profile.csv", profile_to_csv(profile)});
  out.push_back({"vdp_fit_net.json", serialize_net(fit.net)});
  const double near = profile.mean_mse(0, 1), far = profile.mean_mse(3, 4);
  return {near < far, "cost " + fmt("%.3g", fit.cost) + ", mean MSE r in [0,1] " + fmt("%.3g", near) +
                          " < r in [3,4] " + fmt("%.3g", far)};
}

Verdict baseline_smoke(unsigned threads, Artifacts& out) {
  const auto c = vdp_second_moment();
  const auto data = generate_dataset(c, Box::cube(2, -4.0, 4.0), 10'000, kSeed, threads);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.seed = kSeed;
  const auto trained = train_backprop(data, 8, cfg);
  const double mean = data.targets.mean();
  const double constant_mse = (data.targets.array() - mean).square().mean();
  const double final_mse = trained.epoch_loss.back();

  std::string loss = "epoch,mse\n";
  for (std::size_t e = 0; e < trained.epoch_loss.size(); ++e) {
    loss += std::to_string(e + 1) + "," + format_double(trained.epoch_loss[e]) + "\n";
  }
  const auto profile = radial_error_profile(
      [&](std::span<const double> x) { return forward(trained.net, x); }, dual_predictor(c), 4.0, 100, 100);
  out.push_back({"baseline_dataset.csv", dataset_to_csv(data)});
  out.push_back({"baseline_loss.csv", loss});
  out.push_back({"baseline_profile.csv", profile_to_csv(profile)});
  return {final_mse < constant_mse,
          "final MSE " + fmt("%.4g", final_mse) + " < best constant " + fmt("%.4g", constant_mse) +
              "; baseline profile MSE r in [0,1] " + fmt("%.3g", profile.mean_mse(0, 1)) +
              ", r in [3,4] " + fmt("%.3g", profile.mean_mse(3, 4)) + " (not asserted)"};
}

}  // namespace

int main(int argc, char** argv) {
  criterion(1, "generator exactness (OU)", 0.1, ou_generator);
  criterion(2, "generator exactness (vdP)", 1.0, vdp_generator);
  criterion(3, "dual vs analytic (OU)", 1.0, ou_dual_vs_analytic);

  Artifacts first, second;
  criterion(4, "dual vs Monte Carlo (vdP)", 30.0, [&] { return vdp_dual_vs_mc(0, first); });
  criterion(5, "Taylor machinery", 10.0, taylor_machinery);
  criterion(6, "sigmoid derivative table", 0.0, sigmoid_table);
  criterion(7, "embedding fit (OU)", 60.0, [&] { return ou_embedding(0, first); });
  criterion(8, "near-origin advantage (vdP)", 600.0, [&] { return vdp_near_origin(0, first); });
  criterion(9, "baseline pipeline smoke", 300.0, [&] { return baseline_smoke(0, first); });

  criterion(10, "determinism", 0.0, [&] {
    // Second run with a different thread count.
    vdp_dual_vs_mc(3, second);
    ou_embedding(3, second);
    vdp_near_origin(3, second);
    baseline_smoke(3, second);
    std::size_t differing = 0;
    std::string names;
    for (std::size_t i = 0; i < first.size(); ++i) {
      if (i >= second.size() || first[i] != second[i]) {
        ++differing;
        names += " " + first[i].first;
      }
    }
    const bool ok = !first.empty() && first.size() == second.size() && differing == 0;
    return Verdict{ok, std::to_string(first.size()) + " artifacts compared, " +
                           std::to_string(differing) + " differ" + names};
  });

  if (argc > 1) {
    const std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    for (const auto& [name, text] : first) write_file_atomic(dir / name, text);
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
