#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mais/sdp.hpp"

using namespace mais;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("trace minimization with an off-diagonal pin") {
  // min x11 + x22 s.t. x12 + x21 = 2, X psd  ->  X = ones(2,2), objective 2
  SDPProblem p;
  p.block_sizes = {2};
  p.C = {MatrixXd::Identity(2, 2)};
  MatrixXd A0(2, 2);
  A0 << 0, 1, 1, 0;
  p.A = {{A0}};
  p.b = VectorXd::Ones(1) * 2.0;
  const auto r = solve_sdp(p);
  REQUIRE(r.converged);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.X[0](0, 1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("one-by-one blocks reduce to a linear program") {
  // min 2a + 3b s.t. a + b = 1, a,b >= 0 -> a = 1
  SDPProblem p;
  p.block_sizes = {1, 1};
  p.C = {MatrixXd::Constant(1, 1, 2.0), MatrixXd::Constant(1, 1, 3.0)};
  p.A = {{MatrixXd::Ones(1, 1), MatrixXd::Ones(1, 1)}};
  p.b = VectorXd::Ones(1);
  const auto r = solve_sdp(p);
  REQUIRE(r.converged);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(r.X[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zero blocks in constraints are tolerated") {
  // min tr(X) + y over X (2x2), y (1x1) s.t. <I,X> = 1 (y absent), y = 2
  SDPProblem p;
  p.block_sizes = {2, 1};
  p.C = {MatrixXd::Identity(2, 2), MatrixXd::Ones(1, 1)};
  p.A.resize(2);
  p.A[0] = {MatrixXd::Identity(2, 2), MatrixXd()};
  p.A[1] = {MatrixXd(), MatrixXd::Ones(1, 1)};
  p.b = VectorXd(2);
  p.b << 1.0, 2.0;
  const auto r = solve_sdp(p);
  REQUIRE(r.converged);
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("infeasible problem does not converge") {
  // a >= 0 with a = -1
  SDPProblem p;
  p.block_sizes = {1};
  p.C = {MatrixXd::Ones(1, 1)};
  p.A = {{MatrixXd::Ones(1, 1)}};
  p.b = VectorXd::Constant(1, -1.0);
  const auto r = solve_sdp(p);
  CHECK_FALSE(r.converged);
}

TEST_CASE("psd lower bound of an indefinite pencil") {
  // min t s.t. t*I + Q psd where Q = diag(1, -3): expressed as
  // min <e00, T> with blocks T (1x1) and S (2x2), S = t I + Q:
  //   S11 - t = 1, S22 - t = -3, S12 = 0  ->  optimum t = 3 (S psd)
  SDPProblem p;
  p.block_sizes = {1, 2};
  p.C = {MatrixXd::Ones(1, 1), MatrixXd::Zero(2, 2)};
  p.A.resize(3);
  MatrixXd E11 = MatrixXd::Zero(2, 2), E22 = MatrixXd::Zero(2, 2), E12 = MatrixXd::Zero(2, 2);
  E11(0, 0) = 1;
  E22(1, 1) = 1;
  E12(0, 1) = E12(1, 0) = 0.5;
  p.A[0] = {-MatrixXd::Ones(1, 1), E11};
  p.A[1] = {-MatrixXd::Ones(1, 1), E22};
  p.A[2] = {MatrixXd::Zero(1, 1), E12};
  p.b = VectorXd(3);
  p.b << 1.0, -3.0, 0.0;
  const auto r = solve_sdp(p);
  REQUIRE(r.converged);
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-6));
}
