#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mais/linprog.hpp"

using namespace mais;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("bounded maximum over a box") {
  MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  VectorXd b(4);
  b << 1, 1, 2, 2;
  VectorXd c(2);
  c << 3, -1;
  const auto r = lp_maximize(c, A, b);
  REQUIRE(r.status == LPStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(5.0));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(-2.0));
}

TEST_CASE("infeasible system") {
  MatrixXd A(2, 1);
  A << 1, -1;
  VectorXd b(2);
  b << -2, 1;  // x <= -2 and x >= -1
  VectorXd c(1);
  c << 1;
  CHECK(lp_maximize(c, A, b).status == LPStatus::kInfeasible);
}

TEST_CASE("unbounded direction") {
  MatrixXd A(1, 2);
  A << 1, 0;
  VectorXd b(1);
  b << 1;
  VectorXd c(2);
  c << 0, 1;
  CHECK(lp_maximize(c, A, b).status == LPStatus::kUnbounded);
}

TEST_CASE("equality constraints with free variables") {
  // max x + y s.t. x + y + z = 1, z >= -0.5 (as -z <= 0.5)
  MatrixXd A(1, 3);
  A << 0, 0, -1;
  VectorXd b(1);
  b << 0.5;
  MatrixXd Aeq(1, 3);
  Aeq << 1, 1, 1;
  VectorXd beq(1);
  beq << 1;
  VectorXd c(3);
  c << 1, 1, 0;
  const auto r = lp_maximize(c, A, b, Aeq, beq);
  REQUIRE(r.status == LPStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(1.5));
}

TEST_CASE("nonnegative variables") {
  // max -x1 - x2 s.t. x1 + x2 >= 1, x >= 0  -> optimum -1
  MatrixXd A(1, 2);
  A << -1, -1;
  VectorXd b(1);
  b << -1;
  VectorXd c(2);
  c << -1, -1;
  const auto r = lp_maximize_mixed(c, A, b, MatrixXd(), VectorXd(), {true, true});
  REQUIRE(r.status == LPStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(-1.0));
  CHECK(r.x.minCoeff() >= -1e-12);
}

TEST_CASE("degenerate ties are handled deterministically") {
  // square with a redundant diagonal through a vertex
  MatrixXd A(5, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1, 1, 1;
  VectorXd b(5);
  b << 1, 1, 0, 0, 2;
  VectorXd c(2);
  c << 1, 1;
  const auto r1 = lp_maximize(c, A, b);
  const auto r2 = lp_maximize(c, A, b);
  REQUIRE(r1.status == LPStatus::kOptimal);
  CHECK(r1.objective == doctest::Approx(2.0));
  CHECK(r1.x == r2.x);
}
