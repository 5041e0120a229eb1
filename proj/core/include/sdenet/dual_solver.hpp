#pragma once

// Truncated dual-process (backward Kolmogorov) coefficient system
//   dP(k)/dt = sum_n A(k, n) P(n),   A(k, n) = [x^k] L^dagger x^n,
// over the max-degree index set {n : max_i n_i <= N}, and moment evaluation
//   M(x0, t) = sum_n P(n, t) x0^n.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "sdenet/ode.hpp"
#include "sdenet/polynomial.hpp"
#include "sdenet/sde_model.hpp"

namespace sdenet {

struct GeneratorMatrix {
  std::shared_ptr<const IndexSet> index_set;
  // Row = target index k, column = source index n.
  Eigen::SparseMatrix<double, Eigen::RowMajor> entries;
  std::uint64_t model_fingerprint = 0;

  double at(const MultiIndex& target, const MultiIndex& source) const;
};

// Which moment E[x_axis^order] the coefficients represent. Absent for
// coefficients loaded from a bare CSV.
struct Observable {
  std::size_t axis = 0;
  int order = 1;
};

struct DualCoefficients {
  std::shared_ptr<const IndexSet> index_set;
  Eigen::VectorXd values;
  double t = 0.0;
  std::optional<Observable> observable;
  std::uint64_t model_fingerprint = 0;

  std::size_t dim() const { return index_set->dim(); }
  int order() const { return index_set->order(); }
  double value(const MultiIndex& n) const;
};

std::uint64_t model_fingerprint(const SdeModel& model);

GeneratorMatrix build_generator(const SdeModel& model, int order);

// delta initial condition: 1 at n = order * e_axis.
Eigen::VectorXd initial_coefficients(const IndexSet& index_set, std::size_t axis, int order);

struct SolveStats {
  IntegratorStats integrator;
  // sum |P(n, t)| over indices with max_i n_i >= N - 1.
  double spill = 0.0;
};

DualCoefficients solve_dual(const GeneratorMatrix& a, const Eigen::VectorXd& p0, double t,
                            const IntegratorConfig& cfg = {}, SolveStats* stats = nullptr);

// Convenience: generator + delta initial condition + solve for E[x_axis^order].
DualCoefficients solve_moment(const SdeModel& model, int truncation, std::size_t axis,
                              int moment_order, double t, const IntegratorConfig& cfg = {},
                              SolveStats* stats = nullptr);

double spill_mass(const DualCoefficients& coeffs);

double eval_moment(const DualCoefficients& coeffs, std::span<const double> x0);

// CSV with header n_1,...,n_D,value and one row per index in canonical order.
std::string dual_to_csv(const DualCoefficients& coeffs);
// Rebuilds coefficients from a CSV; the rows must cover a full max-degree set.
DualCoefficients dual_from_csv(const std::string& text);

}  // namespace sdenet
