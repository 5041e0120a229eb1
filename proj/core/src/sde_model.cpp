#include "sdenet/sde_model.hpp"

#include <json.hpp>

#include "sdenet/errors.hpp"

namespace sdenet {

using nlohmann::json;

SdeModel::SdeModel(std::vector<Polynomial> drift, Matrix diffusion, std::string name)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)), name_(std::move(name)) {
  const std::size_t d = drift_.size();
  if (d == 0) throw InvalidArgument("SdeModel: dimension must be >= 1");
  if (diffusion_.size() != d) throw InvalidArgument("SdeModel: diffusion must be D x D");
  for (const auto& p : drift_) {
    if (p.dim() != d) throw InvalidArgument("SdeModel: drift polynomial has wrong dimension");
  }
  for (const auto& row : diffusion_) {
    if (row.size() != d) throw InvalidArgument("SdeModel: diffusion must be D x D");
    for (const auto& p : row) {
      if (p.dim() != d) {
        throw InvalidArgument("SdeModel: diffusion polynomial has wrong dimension");
      }
    }
  }
}

namespace {

double require(const ModelParams& params, const std::string& key, const std::string& model) {
  auto it = params.find(key);
  if (it == params.end()) {
    throw InvalidArgument("builtin model '" + model + "' requires parameter '" + key + "'");
  }
  return it->second;
}

SdeModel::Matrix zero_matrix(std::size_t d) {
  return SdeModel::Matrix(d, std::vector<Polynomial>(d, Polynomial(d)));
}

}  // namespace

SdeModel builtin_model(const std::string& name, const ModelParams& params) {
  if (name == "ornstein-uhlenbeck" || name == "ou") {
    const double gamma = require(params, "gamma", name);
    const double sigma = require(params, "sigma", name);
    auto b = zero_matrix(1);
    b[0][0] = Polynomial::constant(1, sigma);
    return SdeModel({Polynomial::variable(1, 0, -gamma)}, std::move(b), "ornstein-uhlenbeck");
  }
  if (name == "van-der-pol" || name == "vdp") {
    const double eps = require(params, "eps", name);
    const double nu11 = require(params, "nu11", name);
    const double nu22 = require(params, "nu22", name);
    const auto x1 = Polynomial::variable(2, 0);
    const auto x2 = Polynomial::variable(2, 1);
    const auto one = Polynomial::constant(2, 1.0);
    // eps * x2 * (1 - x1^2) - x1
    Polynomial a2 = eps * (x2 * (one - x1 * x1)) - x1;
    auto b = zero_matrix(2);
    b[0][0] = Polynomial::constant(2, nu11);
    b[1][1] = Polynomial::constant(2, nu22);
    return SdeModel({x2, std::move(a2)}, std::move(b), "van-der-pol");
  }
  throw InvalidArgument("unknown builtin model '" + name + "'");
}

namespace {

Polynomial parse_terms(const json& node, std::size_t dim, const std::string& where) {
  if (!node.is_array()) throw ParseError(where, "expected a list of terms");
  Polynomial p(dim);
  for (std::size_t t = 0; t < node.size(); ++t) {
    const std::string at = where + "/" + std::to_string(t);
    const json& term = node[t];
    if (!term.is_object() || !term.contains("coef") || !term.contains("powers")) {
      throw ParseError(at, "term needs 'coef' and 'powers'");
    }
    if (!term["coef"].is_number()) throw ParseError(at + "/coef", "expected a number");
    const json& powers = term["powers"];
    if (!powers.is_array() || powers.size() != dim) {
      throw ParseError(at + "/powers", "expected " + std::to_string(dim) + " exponents");
    }
    std::vector<int> e;
    for (std::size_t i = 0; i < dim; ++i) {
      if (!powers[i].is_number_integer()) {
        throw ParseError(at + "/powers/" + std::to_string(i), "expected an integer");
      }
      const auto v = powers[i].get<long long>();
      if (v < 0) throw ParseError(at + "/powers/" + std::to_string(i), "negative exponent");
      e.push_back(static_cast<int>(v));
    }
    p.add_term(MultiIndex(std::move(e)), term["coef"].get<double>());
  }
  return p;
}

json terms_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& [n, c] : p.terms()) {
    out.push_back({{"coef", c},
                   {"powers", std::vector<int>(n.exponents().begin(), n.exponents().end())}});
  }
  return out;
}

}  // namespace

SdeModel parse_model(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object()) throw ParseError("/", "model document must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) {
    throw ParseError("/dim", "missing or non-integer dimension");
  }
  const auto dim_raw = doc["dim"].get<long long>();
  if (dim_raw < 1) throw ParseError("/dim", "dimension must be >= 1");
  const auto dim = static_cast<std::size_t>(dim_raw);

  if (!doc.contains("drift") || !doc["drift"].is_array()) {
    throw ParseError("/drift", "missing drift list");
  }
  const json& drift = doc["drift"];
  if (drift.size() != dim) {
    throw ParseError("/drift", "expected " + std::to_string(dim) + " drift entries, got " +
                                   std::to_string(drift.size()));
  }
  std::vector<Polynomial> a;
  for (std::size_t i = 0; i < dim; ++i) {
    a.push_back(parse_terms(drift[i], dim, "/drift/" + std::to_string(i)));
  }

  if (!doc.contains("diffusion") || !doc["diffusion"].is_array()) {
    throw ParseError("/diffusion", "missing diffusion matrix");
  }
  const json& diff = doc["diffusion"];
  if (diff.size() != dim) throw ParseError("/diffusion", "expected D rows");
  SdeModel::Matrix b;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string row_at = "/diffusion/" + std::to_string(i);
    if (!diff[i].is_array() || diff[i].size() != dim) throw ParseError(row_at, "expected D entries");
    std::vector<Polynomial> row;
    for (std::size_t j = 0; j < dim; ++j) {
      row.push_back(parse_terms(diff[i][j], dim, row_at + "/" + std::to_string(j)));
    }
    b.push_back(std::move(row));
  }

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("/name", "expected a string");
    name = doc["name"].get<std::string>();
  }
  return SdeModel(std::move(a), std::move(b), std::move(name));
}

std::string serialize_model(const SdeModel& model) {
  json doc;
  doc["dim"] = model.dim();
  if (!model.name().empty()) doc["name"] = model.name();
  json drift = json::array();
  for (const auto& p : model.drift()) drift.push_back(terms_to_json(p));
  doc["drift"] = std::move(drift);
  json diff = json::array();
  for (const auto& row : model.diffusion()) {
    json r = json::array();
    for (const auto& p : row) r.push_back(terms_to_json(p));
    diff.push_back(std::move(r));
  }
  doc["diffusion"] = std::move(diff);
  return doc.dump(2);
}

DiffusionProduct diffusion_product(const SdeModel& model) {
  const std::size_t d = model.dim();
  DiffusionProduct out{zero_matrix(d)};
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Polynomial sum(d);
      for (std::size_t k = 0; k < d; ++k) sum += model.diffusion(i, k) * model.diffusion(j, k);
      out.entries[i][j] = sum;
      out.entries[j][i] = std::move(sum);
    }
  }
  return out;
}

Polynomial adjoint_apply(const SdeModel& model, const MultiIndex& n) {
  return adjoint_apply(model, diffusion_product(model), n);
}

Polynomial adjoint_apply(const SdeModel& model, const DiffusionProduct& bbt, const MultiIndex& n) {
  const std::size_t d = model.dim();
  if (n.dim() != d) throw InvalidArgument("adjoint_apply: index has wrong dimension");
  const Polynomial xn = Polynomial::monomial(n);
  Polynomial out(d);
  std::vector<Polynomial> first;
  first.reserve(d);
  for (std::size_t i = 0; i < d; ++i) first.push_back(xn.derivative(i));
  for (std::size_t i = 0; i < d; ++i) {
    if (!first[i].is_zero()) out += model.drift(i) * first[i];
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (bbt(i, j).is_zero() || first[i].is_zero()) continue;
      const Polynomial second = first[i].derivative(j);
      if (!second.is_zero()) out += 0.5 * (bbt(i, j) * second);
    }
  }
  return out;
}

SdeModel shift_model_origin(const SdeModel& model, std::span<const double> c) {
  const std::size_t d = model.dim();
  if (c.size() != d) throw InvalidArgument("shift_model_origin: shift has wrong dimension");
  std::vector<Polynomial> drift;
  for (const auto& p : model.drift()) drift.push_back(poly_shift(p, c));
  SdeModel::Matrix b;
  for (const auto& row : model.diffusion()) {
    std::vector<Polynomial> r;
    for (const auto& p : row) r.push_back(poly_shift(p, c));
    b.push_back(std::move(r));
  }
  return SdeModel(std::move(drift), std::move(b), model.name());
}

}  // namespace sdenet
