#pragma once

// Polynomial-coefficient SDE  dx = a(x) dt + B(x) dW  and the action of its
// backward (adjoint) generator on monomials.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdenet/polynomial.hpp"

namespace sdenet {

class SdeModel {
 public:
  using Matrix = std::vector<std::vector<Polynomial>>;

  SdeModel(std::vector<Polynomial> drift, Matrix diffusion, std::string name = {});

  std::size_t dim() const noexcept { return drift_.size(); }
  const std::vector<Polynomial>& drift() const noexcept { return drift_; }
  const Polynomial& drift(std::size_t i) const { return drift_.at(i); }
  const Matrix& diffusion() const noexcept { return diffusion_; }
  const Polynomial& diffusion(std::size_t i, std::size_t j) const { return diffusion_.at(i).at(j); }
  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const SdeModel&, const SdeModel&) = default;

 private:
  std::vector<Polynomial> drift_;
  Matrix diffusion_;
  std::string name_;
};

// Symmetric D x D matrix of polynomials [B B^T]_{ij}.
struct DiffusionProduct {
  SdeModel::Matrix entries;

  const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries[i][j]; }
};

using ModelParams = std::map<std::string, double>;

// "ornstein-uhlenbeck" (alias "ou"): needs gamma, sigma.
// "van-der-pol" (alias "vdp"): needs eps, nu11, nu22.
SdeModel builtin_model(const std::string& name, const ModelParams& params);

// Reads the JSON model document
//   {"dim": D, "name": "...", "drift": [terms x D], "diffusion": [[terms x D] x D]}
// where a term list is [{"coef": c, "powers": [p_1, ..., p_D]}, ...].
SdeModel parse_model(const std::string& document);
std::string serialize_model(const SdeModel& model);

DiffusionProduct diffusion_product(const SdeModel& model);

// L^dagger x^n = sum_i a_i d_i x^n + 1/2 sum_ij [BB^T]_ij d_i d_j x^n.
Polynomial adjoint_apply(const SdeModel& model, const MultiIndex& n);
// Same, reusing a precomputed diffusion product.
Polynomial adjoint_apply(const SdeModel& model, const DiffusionProduct& bbt, const MultiIndex& n);

// Model for y = x - c.
SdeModel shift_model_origin(const SdeModel& model, std::span<const double> c);

}  // namespace sdenet
