#include "sdenet/taylor_net.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "sdenet/errors.hpp"

namespace sdenet {

using nlohmann::json;

__extension__ typedef __int128 i128;

SigmoidNet::SigmoidNet(Eigen::VectorXd q, Eigen::MatrixXd r, Eigen::VectorXd s)
    : q_(std::move(q)), r_(std::move(r)), s_(std::move(s)) {
  if (q_.size() == 0) throw InvalidArgument("SigmoidNet: need at least one hidden node");
  if (r_.rows() != q_.size() || s_.size() != q_.size() || r_.cols() == 0) {
    throw InvalidArgument("SigmoidNet: inconsistent weight shapes");
  }
  if (!q_.allFinite() || !r_.allFinite() || !s_.allFinite()) {
    throw InvalidArgument("SigmoidNet: non-finite weight");
  }
}

SigmoidNet::SigmoidNet(std::size_t hidden, std::size_t dim)
    : SigmoidNet(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden)),
                 Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(hidden),
                                       static_cast<Eigen::Index>(dim)),
                 Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden))) {}

Eigen::VectorXd SigmoidNet::parameters() const {
  const Eigen::Index n = q_.size();
  const Eigen::Index d = r_.cols();
  Eigen::VectorXd theta(n * (d + 2));
  theta.head(n) = q_;
  for (Eigen::Index i = 0; i < n; ++i) theta.segment(n + i * d, d) = r_.row(i).transpose();
  theta.tail(n) = s_;
  return theta;
}

SigmoidNet SigmoidNet::from_parameters(std::size_t hidden, std::size_t dim,
                                       const Eigen::VectorXd& theta) {
  const auto n = static_cast<Eigen::Index>(hidden);
  const auto d = static_cast<Eigen::Index>(dim);
  if (theta.size() != n * (d + 2)) throw InvalidArgument("SigmoidNet: parameter vector size");
  Eigen::MatrixXd r(n, d);
  for (Eigen::Index i = 0; i < n; ++i) r.row(i) = theta.segment(n + i * d, d).transpose();
  return SigmoidNet(theta.head(n), std::move(r), theta.tail(n));
}

bool operator==(const SigmoidNet& a, const SigmoidNet& b) {
  return a.q_.size() == b.q_.size() && a.r_.cols() == b.r_.cols() && a.q_ == b.q_ &&
         a.r_ == b.r_ && a.s_ == b.s_;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double forward(const SigmoidNet& net, std::span<const double> x) {
  if (x.size() != net.dim()) throw InvalidArgument("forward: input dimension mismatch");
  double y = 0.0;
  for (std::size_t i = 0; i < net.hidden(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double z = net.s()[ii];
    for (std::size_t j = 0; j < x.size(); ++j) z += net.r()(ii, static_cast<Eigen::Index>(j)) * x[j];
    y += net.q()[ii] * sigmoid(z);
  }
  return y;
}

SigmoidDerivativeTable sigmoid_derivatives(int order) {
  if (order < 0 || order > SigmoidDerivativeTable::kMaxOrder) {
    throw OutOfRange("sigmoid_derivatives: order must be in [0, 20]");
  }
  SigmoidDerivativeTable table;
  table.order = order;
  // Coefficients of p_k(u) in powers of u.
  std::vector<i128> p{0, 1};
  for (int k = 0; k <= order; ++k) {
    // p_k(1/2) = sum_j c_j 2^{-j} = (sum_j c_j 2^{deg-j}) / 2^deg
    const int deg = static_cast<int>(p.size()) - 1;
    i128 num = 0;
    for (int j = 0; j <= deg; ++j) {
      i128 term = 0;
      if (__builtin_mul_overflow(p[static_cast<std::size_t>(j)], i128(1) << (deg - j), &term) ||
          __builtin_add_overflow(num, term, &num)) {
        throw OutOfRange("sigmoid_derivatives: overflow");
      }
    }
    i128 den = i128(1) << deg;
    if (num == 0) {
      den = 1;
    } else {
      while ((num % 2) == 0 && den > 1) {
        num /= 2;
        den /= 2;
      }
    }
    constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
    if (num > lim || -num > lim || den > lim) throw OutOfRange("sigmoid_derivatives: overflow");
    Rational r{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
    table.exact.push_back(r);
    table.values.push_back(r.to_double());

    // p_{k+1}(u) = p_k'(u) (u - u^2)
    std::vector<i128> next(p.size() + 1, 0);
    for (std::size_t j = 1; j < p.size(); ++j) {
      i128 dj = 0;
      if (__builtin_mul_overflow(p[j], static_cast<i128>(j), &dj) ||
          __builtin_add_overflow(next[j], dj, &next[j]) ||
          __builtin_sub_overflow(next[j + 1], dj, &next[j + 1])) {
        throw OutOfRange("sigmoid_derivatives: overflow");
      }
    }
    p = std::move(next);
  }
  return table;
}

TaylorBasis::TaylorBasis(std::size_t dim, int order)
    : index_set_(std::make_shared<const IndexSet>(static_cast<int>(dim), order,
                                                  IndexMode::TotalDegree)),
      stride_(static_cast<std::size_t>(order) + 1) {
  const SigmoidDerivativeTable table = sigmoid_derivatives(order);
  std::vector<double> factorial(stride_, 1.0);
  for (std::size_t k = 1; k < stride_; ++k) factorial[k] = factorial[k - 1] * double(k);
  weights_.assign(index_set_->size() * stride_, 0.0);
  std::vector<int> parts(dim + 1);
  for (std::size_t pos = 0; pos < index_set_->size(); ++pos) {
    const MultiIndex& l = (*index_set_)[pos];
    std::copy(l.exponents().begin(), l.exponents().end(), parts.begin());
    for (int k = l.total_degree(); k <= order; ++k) {
      parts[dim] = k - l.total_degree();
      const auto kk = static_cast<std::size_t>(k);
      weights_[pos * stride_ + kk] =
          static_cast<double>(multinomial(k, parts)) * table.values[kk] / factorial[kk];
    }
  }
}

NetworkTaylorCoefficients TaylorBasis::coefficients(const SigmoidNet& net) const {
  if (net.dim() != dim()) throw InvalidArgument("network_taylor: dimension mismatch");
  const auto& set = *index_set_;
  const int order = this->order();
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(set.size()));
  std::vector<double> row(dim());
  for (std::size_t i = 0; i < net.hidden(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < dim(); ++j) row[j] = net.r()(ii, static_cast<Eigen::Index>(j));
    const double q = net.q()[ii];
    const double s = net.s()[ii];
    for (std::size_t pos = 0; pos < set.size(); ++pos) {
      const int deg = set[pos].total_degree();
      double h = 0.0;
      for (int k = order; k >= deg; --k) h = h * s + weight(pos, k);
      values[static_cast<Eigen::Index>(pos)] += q * monomial_eval(set[pos], row) * h;
    }
  }
  return {index_set_, std::move(values)};
}

Eigen::MatrixXd TaylorBasis::jacobian(const SigmoidNet& net) const {
  if (net.dim() != dim()) throw InvalidArgument("taylor_jacobian: dimension mismatch");
  const auto& set = *index_set_;
  const int order = this->order();
  const std::size_t n = net.hidden();
  const std::size_t d = dim();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(set.size()),
                                              static_cast<Eigen::Index>(net.parameter_count()));
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < d; ++j) row[j] = net.r()(ii, static_cast<Eigen::Index>(j));
    const double q = net.q()[ii];
    const double s = net.s()[ii];
    for (std::size_t pos = 0; pos < set.size(); ++pos) {
      const MultiIndex& l = set[pos];
      const int deg = l.total_degree();
      double h = 0.0;
      double dh = 0.0;
      for (int k = order; k >= deg; --k) {
        dh = dh * s + h;
        h = h * s + weight(pos, k);
      }
      const double rl = monomial_eval(l, row);
      const auto p = static_cast<Eigen::Index>(pos);
      jac(p, ii) = rl * h;
      for (std::size_t j = 0; j < d; ++j) {
        if (l[j] == 0) continue;
        double partial = static_cast<double>(l[j]);
        for (std::size_t jj = 0; jj < d; ++jj) {
          const int e = jj == j ? l[jj] - 1 : l[jj];
          for (int m = 0; m < e; ++m) partial *= row[jj];
        }
        jac(p, static_cast<Eigen::Index>(n + i * d + j)) = q * h * partial;
      }
      jac(p, static_cast<Eigen::Index>(n + n * d + i)) = q * rl * dh;
    }
  }
  return jac;
}

NetworkTaylorCoefficients network_taylor(const SigmoidNet& net, int order) {
  return TaylorBasis(net.dim(), order).coefficients(net);
}

Eigen::MatrixXd taylor_jacobian(const SigmoidNet& net, int order) {
  return TaylorBasis(net.dim(), order).jacobian(net);
}

std::string serialize_net(const SigmoidNet& net) {
  json doc;
  doc["hidden"] = net.hidden();
  doc["dim"] = net.dim();
  doc["q"] = std::vector<double>(net.q().data(), net.q().data() + net.q().size());
  json r = json::array();
  for (Eigen::Index i = 0; i < net.r().rows(); ++i) {
    std::vector<double> rowv(net.dim());
    for (Eigen::Index j = 0; j < net.r().cols(); ++j) rowv[static_cast<std::size_t>(j)] = net.r()(i, j);
    r.push_back(rowv);
  }
  doc["R"] = std::move(r);
  doc["s"] = std::vector<double>(net.s().data(), net.s().data() + net.s().size());
  return doc.dump(2);
}

namespace {

Eigen::VectorXd read_vector(const json& doc, const char* key, std::size_t expected) {
  const std::string at = std::string("/") + key;
  if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(at, "missing array");
  const json& arr = doc[key];
  if (arr.size() != expected) throw ParseError(at, "expected " + std::to_string(expected) + " entries");
  Eigen::VectorXd v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    if (!arr[i].is_number()) throw ParseError(at + "/" + std::to_string(i), "expected a number");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

}  // namespace

SigmoidNet parse_net(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("/", "network document must be an object");
  for (const char* key : {"hidden", "dim"}) {
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 1) {
      throw ParseError(std::string("/") + key, "expected a positive integer");
    }
  }
  const auto n = doc["hidden"].get<std::size_t>();
  const auto d = doc["dim"].get<std::size_t>();
  Eigen::VectorXd q = read_vector(doc, "q", n);
  Eigen::VectorXd s = read_vector(doc, "s", n);
  if (!doc.contains("R") || !doc["R"].is_array() || doc["R"].size() != n) {
    throw ParseError("/R", "expected " + std::to_string(n) + " rows");
  }
  Eigen::MatrixXd r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = doc["R"][i];
    const std::string at = "/R/" + std::to_string(i);
    if (!row.is_array() || row.size() != d) throw ParseError(at, "expected " + std::to_string(d) + " entries");
    for (std::size_t j = 0; j < d; ++j) {
      if (!row[j].is_number()) throw ParseError(at + "/" + std::to_string(j), "expected a number");
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  try {
    return SigmoidNet(std::move(q), std::move(r), std::move(s));
  } catch (const InvalidArgument& e) {
    throw ParseError("/", e.what());
  }
}

}  // namespace sdenet
