#pragma once

// Sparse multivariate polynomials over doubles and the multi-index machinery
// shared by the generator construction and the network Taylor matching.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdenet {

// Exponent tuple (n_1, ..., n_D) of the monomial x^n = prod_i x_i^{n_i}.
class MultiIndex {
 public:
  MultiIndex() = default;
  // All-zero index of dimension `dim`.
  explicit MultiIndex(std::size_t dim);
  MultiIndex(std::initializer_list<int> exponents);
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex unit(std::size_t dim, std::size_t axis, int order = 1);

  std::size_t dim() const noexcept { return exps_.size(); }
  int total_degree() const noexcept { return degree_; }
  int max_degree() const noexcept;

  int operator[](std::size_t i) const { return exps_[i]; }
  std::span<const int> exponents() const noexcept { return exps_; }

  MultiIndex operator+(const MultiIndex& other) const;

  // Graded lexicographic: lower total degree first; within a degree, larger
  // leading exponents first, so (1,0) precedes (0,1).
  friend bool operator<(const MultiIndex& a, const MultiIndex& b);
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;

  std::string to_string() const;

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

enum class IndexMode { TotalDegree, MaxDegree };

// Every multi-index of dimension D with total degree <= N (TotalDegree) or
// every entry <= N (MaxDegree), in graded lexicographic order.
std::vector<MultiIndex> multi_index_set(int dim, int order, IndexMode mode);

// Ordered index set with position lookup.
class IndexSet {
 public:
  IndexSet(int dim, int order, IndexMode mode);

  std::size_t dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  IndexMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return indices_.size(); }

  const MultiIndex& operator[](std::size_t pos) const { return indices_[pos]; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  std::optional<std::size_t> find(const MultiIndex& n) const;
  bool contains(const MultiIndex& n) const { return find(n).has_value(); }

 private:
  std::size_t dim_;
  int order_;
  IndexMode mode_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, std::size_t> position_;
};

class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double>;

  explicit Polynomial(std::size_t dim = 1) : dim_(dim) {}
  Polynomial(std::size_t dim, TermMap terms);

  static Polynomial constant(std::size_t dim, double c);
  // c * x_axis
  static Polynomial variable(std::size_t dim, std::size_t axis, double c = 1.0);
  static Polynomial monomial(const MultiIndex& n, double c = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  // -1 for the zero polynomial.
  int degree() const noexcept;
  double coefficient(const MultiIndex& n) const;

  // Adds c to the coefficient of x^n, dropping the term if it lands on 0.
  void add_term(const MultiIndex& n, double c);

  double evaluate(std::span<const double> x) const;

  // d/dx_axis
  Polynomial derivative(std::size_t axis) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, double c) { return a *= c; }
  friend Polynomial operator*(double c, Polynomial a) { return a *= c; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  std::string to_string() const;

 private:
  std::size_t dim_;
  TermMap terms_;
};

enum class PolyOp { Add, Mul, Scale };

// Named dispatch over the arithmetic operators; `Scale` reads only `scalar`.
Polynomial poly_arith(PolyOp op, const Polynomial& p, const Polynomial& q);
Polynomial poly_arith(PolyOp op, const Polynomial& p, double scalar);

// Re-expands p around c: returns r with r(y) = p(y + c).
Polynomial poly_shift(const Polynomial& p, std::span<const double> c);

// k! / prod(parts_i!) for k <= 20.
std::uint64_t multinomial(int k, std::span<const int> parts);
std::uint64_t binomial(int n, int k);

// prod_i x_i^{n_i} with 0^0 = 1.
double monomial_eval(const MultiIndex& n, std::span<const double> x);

}  // namespace sdenet
