#pragma once

// One-hidden-layer sigmoid network y = q^T sigma(R x + s) and its Taylor
// coefficients around x = 0:
//
//   P_NN(l) = sum_{k=|l|}^{N} sum_i multinomial(k; l_1..l_D, k-|l|)
//             * sigma^(k)(0)/k! * q_i * r_i^l * s_i^{k-|l|}
//
// Parameters are flattened as [q_0..q_{n-1}, R row-major, s_0..s_{n-1}].

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sdenet/polynomial.hpp"

namespace sdenet {

class SigmoidNet {
 public:
  SigmoidNet(Eigen::VectorXd q, Eigen::MatrixXd r, Eigen::VectorXd s);
  // Zero weights.
  SigmoidNet(std::size_t hidden, std::size_t dim);

  std::size_t hidden() const noexcept { return static_cast<std::size_t>(q_.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(r_.cols()); }
  std::size_t parameter_count() const noexcept { return hidden() * (dim() + 2); }

  const Eigen::VectorXd& q() const noexcept { return q_; }
  const Eigen::MatrixXd& r() const noexcept { return r_; }
  const Eigen::VectorXd& s() const noexcept { return s_; }

  Eigen::VectorXd parameters() const;
  static SigmoidNet from_parameters(std::size_t hidden, std::size_t dim,
                                    const Eigen::VectorXd& theta);

  friend bool operator==(const SigmoidNet& a, const SigmoidNet& b);

 private:
  Eigen::VectorXd q_;
  Eigen::MatrixXd r_;
  Eigen::VectorXd s_;
};

double sigmoid(double z) noexcept;

double forward(const SigmoidNet& net, std::span<const double> x);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// sigma^(k)(0) for k = 0..order, exact.
struct SigmoidDerivativeTable {
  int order = 0;
  std::vector<Rational> exact;
  std::vector<double> values;

  static constexpr int kMaxOrder = 20;
};

// Derived from sigma' = sigma (1 - sigma): sigma^(k) = p_k(sigma) with
// p_0(u) = u and p_{k+1}(u) = p_k'(u) u (1 - u), evaluated at u = 1/2.
SigmoidDerivativeTable sigmoid_derivatives(int order);

struct NetworkTaylorCoefficients {
  std::shared_ptr<const IndexSet> index_set;  // total-degree set
  Eigen::VectorXd values;
};

// Precomputed multinomial(k; l, k-|l|) sigma^(k)(0)/k! weights for one
// (dim, order) pair. Reusable across networks of the same shape.
class TaylorBasis {
 public:
  TaylorBasis(std::size_t dim, int order);

  std::size_t dim() const noexcept { return index_set_->dim(); }
  int order() const noexcept { return index_set_->order(); }
  const std::shared_ptr<const IndexSet>& index_set() const noexcept { return index_set_; }

  // Weight for (index position, k); zero for k < |l|.
  double weight(std::size_t pos, int k) const { return weights_[pos * stride_ + static_cast<std::size_t>(k)]; }

  NetworkTaylorCoefficients coefficients(const SigmoidNet& net) const;
  // Rows follow the index set, columns the parameter flattening.
  Eigen::MatrixXd jacobian(const SigmoidNet& net) const;

 private:
  std::shared_ptr<const IndexSet> index_set_;
  std::size_t stride_;
  std::vector<double> weights_;
};

NetworkTaylorCoefficients network_taylor(const SigmoidNet& net, int order);
Eigen::MatrixXd taylor_jacobian(const SigmoidNet& net, int order);

// {"hidden": n, "dim": D, "q": [...], "R": [[...]], "s": [...]}
std::string serialize_net(const SigmoidNet& net);
SigmoidNet parse_net(const std::string& document);

}  // namespace sdenet
