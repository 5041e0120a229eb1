#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sdenet/errors.hpp"
#include "sdenet/polynomial.hpp"

using namespace sdenet;

namespace {

Polynomial random_poly(std::mt19937_64& rng, std::size_t dim, int max_degree, int terms) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  Polynomial p(dim);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(dim, 0);
    int budget = deg(rng);
    for (std::size_t i = 0; i < dim && budget > 0; ++i) {
      std::uniform_int_distribution<int> take(0, budget);
      e[i] = i + 1 == dim ? budget : take(rng);
      budget -= e[i];
    }
    p.add_term(MultiIndex(e), coef(rng));
  }
  return p;
}

bool coeffwise_close(const Polynomial& a, const Polynomial& b, double rel) {
  double scale = 0.0;
  for (const auto& [n, c] : a.terms()) scale = std::max(scale, std::abs(c));
  for (const auto& [n, c] : b.terms()) {
    if (std::abs(c - a.coefficient(n)) > rel * std::max(scale, 1.0)) return false;
  }
  for (const auto& [n, c] : a.terms()) {
    if (std::abs(c - b.coefficient(n)) > rel * std::max(scale, 1.0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("multi_index_set enumerates in graded lexicographic order") {
  const auto set = multi_index_set(2, 2, IndexMode::TotalDegree);
  const std::vector<MultiIndex> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(set == expected);

  const auto line = multi_index_set(1, 12, IndexMode::MaxDegree);
  REQUIRE(line.size() == 13);
  for (int n = 0; n <= 12; ++n) CHECK(line[static_cast<std::size_t>(n)] == MultiIndex{n});

  const auto square = multi_index_set(2, 1, IndexMode::MaxDegree);
  CHECK(square == std::vector<MultiIndex>{{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

TEST_CASE("multi_index_set counts") {
  for (int d = 1; d <= 3; ++d) {
    for (int n = 0; n <= 6; ++n) {
      const auto total = multi_index_set(d, n, IndexMode::TotalDegree);
      const auto maxd = multi_index_set(d, n, IndexMode::MaxDegree);
      CHECK(total.size() == binomial(n + d, d));
      CHECK(maxd.size() == static_cast<std::size_t>(std::pow(n + 1, d)));
      CHECK(std::is_sorted(total.begin(), total.end()));
      CHECK(std::adjacent_find(maxd.begin(), maxd.end()) == maxd.end());
    }
  }
  CHECK(multi_index_set(2, 17, IndexMode::MaxDegree).size() == 324);
}

TEST_CASE("multi_index_set rejects bad arguments") {
  CHECK_THROWS_AS(multi_index_set(0, 2, IndexMode::TotalDegree), InvalidArgument);
  CHECK_THROWS_AS(multi_index_set(2, -1, IndexMode::MaxDegree), InvalidArgument);
  CHECK_THROWS_AS(MultiIndex({1, -1}), InvalidArgument);
}

TEST_CASE("IndexSet lookup") {
  const IndexSet set(2, 3, IndexMode::MaxDegree);
  for (std::size_t i = 0; i < set.size(); ++i) CHECK(set.find(set[i]) == i);
  CHECK_FALSE(set.contains(MultiIndex{4, 0}));
  CHECK(set.contains(MultiIndex{3, 3}));
}

TEST_CASE("poly_arith examples") {
  const auto x1 = Polynomial::variable(2, 0);
  const auto x2 = Polynomial::variable(2, 1);
  const auto one = Polynomial::constant(2, 1.0);

  const auto sq = poly_arith(PolyOp::Mul, Polynomial::variable(1, 0), Polynomial::variable(1, 0));
  CHECK(sq == Polynomial::monomial(MultiIndex{2}));

  const auto zero = poly_arith(PolyOp::Add, x2, -x2);
  CHECK(zero.is_zero());
  CHECK(zero.terms().empty());

  const auto prod = poly_arith(PolyOp::Mul, one - x1 * x1, x2);
  Polynomial expected(2);
  expected.add_term({0, 1}, 1.0);
  expected.add_term({2, 1}, -1.0);
  CHECK(prod == expected);

  CHECK(poly_arith(PolyOp::Scale, x1, 3.0).coefficient({1, 0}) == 3.0);
  CHECK(poly_arith(PolyOp::Scale, x1, 0.0).is_zero());
  CHECK_THROWS_AS(poly_arith(PolyOp::Add, x1, Polynomial::variable(1, 0)), InvalidArgument);
  CHECK_THROWS_AS(poly_arith(PolyOp::Mul, x1, Polynomial::variable(3, 0)), InvalidArgument);
}

TEST_CASE("arithmetic is commutative and associative") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const auto p = random_poly(rng, d, 4, 5);
    const auto q = random_poly(rng, d, 4, 5);
    const auto r = random_poly(rng, d, 4, 5);
    CHECK(p * q == q * p);
    CHECK(p + q == q + p);
    CHECK(coeffwise_close((p + q) + r, p + (q + r), 1e-15));
  }
}

TEST_CASE("poly_shift examples") {
  const std::vector<double> one{1.0};
  const auto shifted = poly_shift(Polynomial::monomial(MultiIndex{2}), one);
  CHECK(shifted.coefficient(MultiIndex{2}) == 1.0);
  CHECK(shifted.coefficient(MultiIndex{1}) == 2.0);
  CHECK(shifted.coefficient(MultiIndex{0}) == 1.0);
  CHECK(shifted.terms().size() == 3);

  std::mt19937_64 rng(3);
  const auto p = random_poly(rng, 2, 5, 6);
  const std::vector<double> zero{0.0, 0.0};
  CHECK(poly_shift(p, zero) == p);

  const double gamma = 0.7, c0 = 1.3;
  const auto lin = poly_shift(Polynomial::variable(1, 0, -gamma), std::vector<double>{c0});
  CHECK(lin.coefficient(MultiIndex{1}) == -gamma);
  CHECK(lin.coefficient(MultiIndex{0}) == doctest::Approx(-gamma * c0));

  CHECK_THROWS_AS(poly_shift(p, one), InvalidArgument);
}

TEST_CASE("poly_shift preserves degree and values, and round-trips") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 2;
    const auto p = random_poly(rng, d, 6, 6);
    std::vector<double> c(d), minus(d), y(d), x(d);
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = shift(rng);
      minus[i] = -c[i];
      y[i] = shift(rng) / 2;
      x[i] = y[i] + c[i];
    }
    const auto q = poly_shift(p, c);
    CHECK(q.degree() == p.degree());
    CHECK(q.evaluate(y) == doctest::Approx(p.evaluate(x)).epsilon(1e-10).scale(1.0));
    CHECK(coeffwise_close(p, poly_shift(q, minus), 1e-12));
  }
}

TEST_CASE("multinomial examples and multinomial theorem") {
  CHECK(multinomial(3, std::vector<int>{1, 1, 1}) == 6);
  CHECK(multinomial(4, std::vector<int>{4}) == 1);
  CHECK(multinomial(5, std::vector<int>{2, 3}) == 10);
  CHECK(multinomial(20, std::vector<int>{20, 0, 0}) == 1);
  CHECK(multinomial(20, std::vector<int>{1, 1, 18}) == 380);
  CHECK_THROWS_AS(multinomial(5, std::vector<int>{2, 2}), InvalidArgument);

  // Sum over compositions of k into D + 1 parts equals (D + 1)^k.
  for (int d = 1; d <= 3; ++d) {
    for (int k = 0; k <= 8; ++k) {
      std::uint64_t sum = 0;
      for (const auto& n : multi_index_set(d, k, IndexMode::TotalDegree)) {
        std::vector<int> parts(n.exponents().begin(), n.exponents().end());
        parts.push_back(k - n.total_degree());
        sum += multinomial(k, parts);
      }
      CHECK(sum == static_cast<std::uint64_t>(std::pow(d + 1, k)));
    }
  }
}

TEST_CASE("monomial_eval") {
  CHECK(monomial_eval(MultiIndex{0, 0}, std::vector<double>{3, 7}) == 1.0);
  CHECK(monomial_eval(MultiIndex{2, 1}, std::vector<double>{2, 3}) == 12.0);
  CHECK(monomial_eval(MultiIndex{1}, std::vector<double>{-1.5}) == -1.5);
  CHECK(monomial_eval(MultiIndex{0}, std::vector<double>{0.0}) == 1.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_int_distribution<int> exp(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const MultiIndex n{exp(rng), exp(rng)};
    const MultiIndex m{exp(rng), exp(rng)};
    const std::vector<double> x{coord(rng), coord(rng)};
    const double lhs = monomial_eval(n, x) * monomial_eval(m, x);
    const double rhs = monomial_eval(n + m, x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(rhs), 1e-300));
  }
}

TEST_CASE("derivative") {
  Polynomial p(2);
  p.add_term({3, 1}, 2.0);
  p.add_term({0, 2}, 5.0);
  const auto d1 = p.derivative(0);
  CHECK(d1.coefficient({2, 1}) == 6.0);
  CHECK(d1.terms().size() == 1);
  const auto d2 = p.derivative(1);
  CHECK(d2.coefficient({3, 0}) == 2.0);
  CHECK(d2.coefficient({0, 1}) == 10.0);
}
