#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mais/polynomial.hpp"

using namespace mais;

TEST_CASE("multinomial coefficients") {
  CHECK(multinomial({2, 0}) == 1);
  CHECK(multinomial({1, 1}) == 2);
  // 4!/(2! 1! 1!) = 12
  CHECK(multinomial({2, 1, 1}) == 12);
  CHECK(multinomial({0, 0, 0}) == 1);
  CHECK(multinomial({3, 2}) == 10);
  CHECK_THROWS_AS(multinomial({-1, 2}), std::invalid_argument);
}

TEST_CASE("polynomial arithmetic keeps canonical form") {
  Polynomial p(2);
  p.add_term({2, 0}, 1.0);
  p.add_term({0, 2}, 1.0);
  p.add_term({2, 0}, -1.0);  // cancels
  CHECK(p.terms().size() == 1);
  CHECK(p.coefficient({0, 2}) == doctest::Approx(1.0));

  Polynomial q(2);
  q.add_term({1, 0}, 2.0);
  Polynomial prod = p * q;  // 2 x1 x2^2
  CHECK(prod.terms().size() == 1);
  CHECK(prod.coefficient({1, 2}) == doctest::Approx(2.0));
  CHECK(prod.max_degree() == 3);
}

TEST_CASE("evaluation") {
  Polynomial p(2);
  p.add_term({0, 2}, 1.0);
  p.add_term({1, 1}, 6.0 * std::sqrt(2.0));
  p.add_term({2, 0}, -4.0);
  Eigen::VectorXd x(2);
  x << 0.3, -0.5;
  const double expect = 0.25 + 6.0 * std::sqrt(2.0) * 0.3 * (-0.5) - 4.0 * 0.09;
  CHECK(p.eval(x) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("degrees present ignores constants") {
  Polynomial p(2);
  p.add_term({0, 0}, 0.5);
  p.add_term({1, 0}, 1.0);
  p.add_term({1, 1}, 1.0);
  const auto degs = p.monomial_degrees();
  REQUIRE(degs.size() == 2);
  CHECK(degs[0] == 1);
  CHECK(degs[1] == 2);
}

TEST_CASE("coefficient distance is symmetric and exact") {
  Polynomial p(2), q(2);
  p.add_term({2, 0}, 1.0);
  q.add_term({2, 0}, 1.0);
  q.add_term({0, 1}, 1e-3);
  CHECK(p.coefficient_distance(q) == doctest::Approx(1e-3));
  CHECK(q.coefficient_distance(p) == doctest::Approx(1e-3));
  CHECK(p.coefficient_distance(p) == 0.0);
}
