#include "sdenet/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sdenet/errors.hpp"

namespace sdenet {

MultiIndex::MultiIndex(std::size_t dim) : exps_(dim, 0) {}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::vector<int>(exponents)) {}

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw InvalidArgument("MultiIndex: negative exponent " + std::to_string(e));
    degree_ += e;
  }
}

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t axis, int order) {
  if (axis >= dim) throw InvalidArgument("MultiIndex::unit: axis out of range");
  std::vector<int> e(dim, 0);
  e[axis] = order;
  return MultiIndex(std::move(e));
}

int MultiIndex::max_degree() const noexcept {
  return exps_.empty() ? 0 : *std::max_element(exps_.begin(), exps_.end());
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw InvalidArgument("MultiIndex: dimension mismatch");
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

bool operator<(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  return std::lexicographical_compare(b.exps_.begin(), b.exps_.end(), a.exps_.begin(),
                                      a.exps_.end());
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(exps_[i]);
  }
  return out + ")";
}

namespace {

// Emits all exponent vectors of dimension `dim` with the given total degree
// in descending lexicographic order, each entry capped at `cap`.
void compositions(std::size_t dim, int degree, int cap, std::vector<int>& scratch,
                  std::size_t pos, std::vector<MultiIndex>& out) {
  if (pos + 1 == dim) {
    if (degree <= cap) {
      scratch[pos] = degree;
      out.emplace_back(scratch);
    }
    return;
  }
  for (int e = std::min(degree, cap); e >= 0; --e) {
    scratch[pos] = e;
    compositions(dim, degree - e, cap, scratch, pos + 1, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_index_set(int dim, int order, IndexMode mode) {
  if (dim <= 0) throw InvalidArgument("multi_index_set: dimension must be >= 1");
  if (order < 0) throw InvalidArgument("multi_index_set: order must be >= 0");
  const auto d = static_cast<std::size_t>(dim);
  const int cap = order;
  const int max_total = mode == IndexMode::TotalDegree ? order : order * dim;
  std::vector<MultiIndex> out;
  std::vector<int> scratch(d, 0);
  for (int degree = 0; degree <= max_total; ++degree) {
    compositions(d, degree, cap, scratch, 0, out);
  }
  return out;
}

IndexSet::IndexSet(int dim, int order, IndexMode mode)
    : dim_(static_cast<std::size_t>(std::max(dim, 0))),
      order_(order),
      mode_(mode),
      indices_(multi_index_set(dim, order, mode)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) position_.emplace(indices_[i], i);
}

std::optional<std::size_t> IndexSet::find(const MultiIndex& n) const {
  auto it = position_.find(n);
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

Polynomial::Polynomial(std::size_t dim, TermMap terms) : dim_(dim) {
  for (auto& [n, c] : terms) add_term(n, c);
}

Polynomial Polynomial::constant(std::size_t dim, double c) {
  Polynomial p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t axis, double c) {
  Polynomial p(dim);
  p.add_term(MultiIndex::unit(dim, axis), c);
  return p;
}

Polynomial Polynomial::monomial(const MultiIndex& n, double c) {
  Polynomial p(n.dim());
  p.add_term(n, c);
  return p;
}

int Polynomial::degree() const noexcept {
  int d = -1;
  for (const auto& [n, c] : terms_) d = std::max(d, n.total_degree());
  return d;
}

double Polynomial::coefficient(const MultiIndex& n) const {
  auto it = terms_.find(n);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& n, double c) {
  if (n.dim() != dim_) {
    throw InvalidArgument("Polynomial: term " + n.to_string() + " has wrong dimension");
  }
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(n, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != dim_) throw InvalidArgument("Polynomial::evaluate: dimension mismatch");
  double sum = 0.0;
  for (const auto& [n, c] : terms_) sum += c * monomial_eval(n, x);
  return sum;
}

Polynomial Polynomial::derivative(std::size_t axis) const {
  if (axis >= dim_) throw InvalidArgument("Polynomial::derivative: axis out of range");
  Polynomial out(dim_);
  for (const auto& [n, c] : terms_) {
    if (n[axis] == 0) continue;
    std::vector<int> e(n.exponents().begin(), n.exponents().end());
    const int k = e[axis]--;
    out.add_term(MultiIndex(std::move(e)), c * k);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.dim_ != dim_) throw InvalidArgument("Polynomial: dimension mismatch in add");
  for (const auto& [n, c] : other.terms_) add_term(n, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.dim_ != dim_) throw InvalidArgument("Polynomial: dimension mismatch in sub");
  for (const auto& [n, c] : other.terms_) add_term(n, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double c) {
  if (c == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= c;
    it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dim_ != b.dim_) throw InvalidArgument("Polynomial: dimension mismatch in mul");
  // Partial products are summed in sorted order so that a * b == b * a holds
  // exactly, not just up to rounding.
  std::map<MultiIndex, std::vector<double>> partials;
  for (const auto& [na, ca] : a.terms_) {
    for (const auto& [nb, cb] : b.terms_) partials[na + nb].push_back(ca * cb);
  }
  Polynomial out(a.dim_);
  for (auto& [n, values] : partials) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    out.add_term(n, sum);
  }
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [n, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (n[i] == 0) continue;
      os << "*x" << (i + 1);
      if (n[i] > 1) os << '^' << n[i];
    }
  }
  return os.str();
}

Polynomial poly_arith(PolyOp op, const Polynomial& p, const Polynomial& q) {
  switch (op) {
    case PolyOp::Add:
      return p + q;
    case PolyOp::Mul:
      return p * q;
    case PolyOp::Scale:
      break;
  }
  throw InvalidArgument("poly_arith: scale takes a scalar operand");
}

Polynomial poly_arith(PolyOp op, const Polynomial& p, double scalar) {
  if (op != PolyOp::Scale) throw InvalidArgument("poly_arith: add/mul take a polynomial operand");
  return p * scalar;
}

Polynomial poly_shift(const Polynomial& p, std::span<const double> c) {
  const std::size_t dim = p.dim();
  if (c.size() != dim) throw InvalidArgument("poly_shift: shift vector has wrong dimension");
  Polynomial out(dim);
  std::vector<int> j(dim);
  for (const auto& [n, coef] : p.terms()) {
    // Odometer over 0 <= j_i <= n_i; each j contributes
    // coef * prod_i C(n_i, j_i) c_i^{n_i - j_i} y^j.
    std::fill(j.begin(), j.end(), 0);
    while (true) {
      double w = coef;
      for (std::size_t i = 0; i < dim; ++i) {
        w *= static_cast<double>(binomial(n[i], j[i]));
        const int rest = n[i] - j[i];
        for (int r = 0; r < rest; ++r) w *= c[i];
      }
      out.add_term(MultiIndex(j), w);
      std::size_t i = 0;
      while (i < dim && j[i] == n[i]) j[i++] = 0;
      if (i == dim) break;
      ++j[i];
    }
  }
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) is divisible by i at every step.
    const auto num = static_cast<std::uint64_t>(n - k + i);
    const std::uint64_t g = std::gcd(r, static_cast<std::uint64_t>(i));
    const std::uint64_t reduced = r / g;
    const std::uint64_t den = static_cast<std::uint64_t>(i) / g;
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(reduced, num / den, &next)) {
      throw OutOfRange("binomial: overflow for n=" + std::to_string(n));
    }
    r = next;
  }
  return r;
}

std::uint64_t multinomial(int k, std::span<const int> parts) {
  long sum = 0;
  for (int p : parts) {
    if (p < 0) throw InvalidArgument("multinomial: negative part");
    sum += p;
  }
  if (sum != k) throw InvalidArgument("multinomial: parts do not sum to k");
  std::uint64_t r = 1;
  int remaining = k;
  for (int p : parts) {
    std::uint64_t next = 0;
    if (__builtin_mul_overflow(r, binomial(remaining, p), &next)) {
      throw OutOfRange("multinomial: overflow for k=" + std::to_string(k));
    }
    r = next;
    remaining -= p;
  }
  return r;
}

double monomial_eval(const MultiIndex& n, std::span<const double> x) {
  if (x.size() != n.dim()) throw InvalidArgument("monomial_eval: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (int e = 0; e < n[i]; ++e) v *= x[i];
  }
  return v;
}

}  // namespace sdenet
