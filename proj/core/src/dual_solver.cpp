#include "sdenet/dual_solver.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "sdenet/errors.hpp"
#include "sdenet/io.hpp"

namespace sdenet {

double GeneratorMatrix::at(const MultiIndex& target, const MultiIndex& source) const {
  auto k = index_set->find(target);
  auto n = index_set->find(source);
  if (!k || !n) return 0.0;
  return entries.coeff(static_cast<Eigen::Index>(*k), static_cast<Eigen::Index>(*n));
}

double DualCoefficients::value(const MultiIndex& n) const {
  auto pos = index_set->find(n);
  return pos ? values[static_cast<Eigen::Index>(*pos)] : 0.0;
}

std::uint64_t model_fingerprint(const SdeModel& model) { return fnv1a(serialize_model(model)); }

GeneratorMatrix build_generator(const SdeModel& model, int order) {
  if (order < 0) throw InvalidArgument("build_generator: truncation order must be >= 0");
  auto set = std::make_shared<const IndexSet>(static_cast<int>(model.dim()), order,
                                              IndexMode::MaxDegree);
  const DiffusionProduct bbt = diffusion_product(model);
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t col = 0; col < set->size(); ++col) {
    const Polynomial image = adjoint_apply(model, bbt, (*set)[col]);
    for (const auto& [k, c] : image.terms()) {
      if (auto row = set->find(k)) {
        triplets.emplace_back(static_cast<int>(*row), static_cast<int>(col), c);
      }
    }
  }
  const auto size = static_cast<Eigen::Index>(set->size());
  GeneratorMatrix g{set, Eigen::SparseMatrix<double, Eigen::RowMajor>(size, size),
                    model_fingerprint(model)};
  g.entries.setFromTriplets(triplets.begin(), triplets.end());
  g.entries.makeCompressed();
  return g;
}

Eigen::VectorXd initial_coefficients(const IndexSet& index_set, std::size_t axis, int order) {
  if (axis >= index_set.dim()) throw OutOfRange("initial_coefficients: axis out of range");
  if (order < 0 || order > index_set.order()) {
    throw OutOfRange("initial_coefficients: moment order " + std::to_string(order) +
                     " exceeds truncation " + std::to_string(index_set.order()));
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(index_set.size()));
  auto pos = index_set.find(MultiIndex::unit(index_set.dim(), axis, order));
  p[static_cast<Eigen::Index>(*pos)] = 1.0;
  return p;
}

double spill_mass(const DualCoefficients& coeffs) {
  const int threshold = coeffs.order() - 1;
  double spill = 0.0;
  for (std::size_t i = 0; i < coeffs.index_set->size(); ++i) {
    if ((*coeffs.index_set)[i].max_degree() >= threshold) {
      spill += std::abs(coeffs.values[static_cast<Eigen::Index>(i)]);
    }
  }
  return spill;
}

DualCoefficients solve_dual(const GeneratorMatrix& a, const Eigen::VectorXd& p0, double t,
                            const IntegratorConfig& cfg, SolveStats* stats) {
  if (t < 0.0) throw InvalidArgument("solve_dual: horizon must be >= 0");
  if (p0.size() != a.entries.cols()) throw InvalidArgument("solve_dual: P0 dimension mismatch");
  Eigen::VectorXd p = p0;
  const auto& mat = a.entries;
  IntegratorStats istats = integrate_dopri5(
      [&mat](const Eigen::VectorXd& y, Eigen::VectorXd& dy) { dy.noalias() = mat * y; }, p, t,
      cfg);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) throw SolverError("solve_dual: non-finite coefficient", t, 0.0);
  }
  DualCoefficients out{a.index_set, std::move(p), t, std::nullopt, a.model_fingerprint};
  if (stats) {
    stats->integrator = istats;
    stats->spill = spill_mass(out);
  }
  return out;
}

DualCoefficients solve_moment(const SdeModel& model, int truncation, std::size_t axis,
                              int moment_order, double t, const IntegratorConfig& cfg,
                              SolveStats* stats) {
  const GeneratorMatrix a = build_generator(model, truncation);
  const Eigen::VectorXd p0 = initial_coefficients(*a.index_set, axis, moment_order);
  DualCoefficients out = solve_dual(a, p0, t, cfg, stats);
  out.observable = Observable{axis, moment_order};
  return out;
}

double eval_moment(const DualCoefficients& coeffs, std::span<const double> x0) {
  if (x0.size() != coeffs.dim()) throw InvalidArgument("eval_moment: x0 dimension mismatch");
  double sum = 0.0;
  const auto& set = *coeffs.index_set;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double p = coeffs.values[static_cast<Eigen::Index>(i)];
    if (p != 0.0) sum += p * monomial_eval(set[i], x0);
  }
  return sum;
}

std::string dual_to_csv(const DualCoefficients& coeffs) {
  std::string out;
  const std::size_t d = coeffs.dim();
  for (std::size_t i = 0; i < d; ++i) out += "n_" + std::to_string(i + 1) + ",";
  out += "value\n";
  const auto& set = *coeffs.index_set;
  for (std::size_t r = 0; r < set.size(); ++r) {
    for (std::size_t i = 0; i < d; ++i) out += std::to_string(set[r][i]) + ",";
    out += format_double(coeffs.values[static_cast<Eigen::Index>(r)]);
    out += '\n';
  }
  return out;
}

DualCoefficients dual_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1", "empty dual CSV");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header.back() != "value") {
    throw ParseError("line 1", "expected header n_1,...,n_D,value");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (header[i] != "n_" + std::to_string(i + 1)) {
      throw ParseError("line 1", "unexpected column '" + header[i] + "'");
    }
  }
  std::map<MultiIndex, double> rows;
  int order = 0;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::string where = "line " + std::to_string(lineno);
    const auto cells = split_csv_line(line);
    if (cells.size() != d + 1) throw ParseError(where, "wrong number of columns");
    std::vector<int> e;
    for (std::size_t i = 0; i < d; ++i) {
      double v = 0.0;
      try {
        v = parse_double(cells[i]);
      } catch (const ParseError& err) {
        throw ParseError(where, err.what());
      }
      if (v < 0 || v != std::floor(v)) throw ParseError(where, "index must be a non-negative integer");
      e.push_back(static_cast<int>(v));
      order = std::max(order, e.back());
    }
    double value = 0.0;
    try {
      value = parse_double(cells[d]);
    } catch (const ParseError& err) {
      throw ParseError(where, err.what());
    }
    if (!rows.emplace(MultiIndex(std::move(e)), value).second) {
      throw ParseError(where, "duplicate index");
    }
  }
  auto set = std::make_shared<const IndexSet>(static_cast<int>(d), order, IndexMode::MaxDegree);
  if (rows.size() != set->size()) {
    throw ParseError("", "dual CSV has " + std::to_string(rows.size()) +
                             " rows; a full max-degree set of order " + std::to_string(order) +
                             " needs " + std::to_string(set->size()));
  }
  Eigen::VectorXd values(static_cast<Eigen::Index>(set->size()));
  for (const auto& [n, v] : rows) values[static_cast<Eigen::Index>(*set->find(n))] = v;
  return DualCoefficients{set, std::move(values), 0.0, std::nullopt, 0};
}

}  // namespace sdenet
