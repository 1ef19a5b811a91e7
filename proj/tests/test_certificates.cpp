#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mais/certificates.hpp"
#include "mais/engine.hpp"

using namespace mais;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const double s2 = std::sqrt(2.0);

MatrixXd running_G() {
  MatrixXd G(3, 3);
  G << 1, 0, 1, 1, 6, -4, -3, 10, 2;
  return G;
}

std::vector<MatrixXd> running_modes() {
  MatrixXd A1(2, 2), A2(2, 2);
  A1 << 1.0425, 0.3416, -0.5893, 0.5839;
  A2 << 0.0, 0.65, 0.65, 0.0;
  return {A1, A2};
}

Polynomial circle(double scale = 1.0) {
  Polynomial p(2);
  p.add_term({2, 0}, scale);
  p.add_term({0, 2}, scale);
  return p;
}

}  // namespace

TEST_CASE("invariance certificate for the identity system") {
  LiftBasis basis(2, {2});
  const auto sys = lift_matrix_set({MatrixXd::Identity(2, 2)}, basis);
  const auto out = check_invariance(running_G(), sys);
  REQUIRE(out.feasible);
  CHECK(out.certificate->epsilon == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(out.invariant());
  CHECK((out.certificate->H[0] - MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("running-example lifted set is not certified invariant") {
  LiftBasis basis(2, {2});
  const auto sys = lift_matrix_set(running_modes(), basis);
  const auto out = check_invariance(running_G(), sys);
  CHECK_FALSE(out.feasible);
  CHECK_FALSE(out.invariant());
}

TEST_CASE("contraction certifies the unit disk") {
  LiftBasis basis(2, {2});
  const auto sys = lift_matrix_set({0.5 * MatrixXd::Identity(2, 2)}, basis);
  MatrixXd G(1, 3);
  G << 1, 0, 1;
  const auto out = check_invariance(G, sys);
  REQUIRE(out.feasible);
  CHECK(out.invariant());
  CHECK(out.certificate->epsilon == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("infeasible invariance LP is consistent with a simulation witness") {
  // unit disk under the example-1 matrix: the LP finds no certificate, and a
  // grid point indeed leaves the disk in one step
  MatrixXd A(2, 2);
  A << 1.0216, 0.3234, -0.6597, 0.5226;
  LiftBasis basis(2, {2});
  const auto sys = lift_matrix_set({A}, basis);
  MatrixXd G(1, 3);
  G << 1, 0, 1;
  CHECK_FALSE(check_invariance(G, sys).feasible);

  bool escaped = false;
  for (int i = -10; i <= 10 && !escaped; ++i)
    for (int j = -10; j <= 10 && !escaped; ++j) {
      VectorXd x(2);
      x << i / 10.0, j / 10.0;
      if (x.squaredNorm() <= 1.0 && (A * x).squaredNorm() > 1.0 + 1e-9) escaped = true;
    }
  CHECK(escaped);
}

TEST_CASE("jsr of a single matrix collapses to its spectral radius") {
  MatrixXd A(2, 2);
  A << 1.0216, 0.3234, -0.6597, 0.5226;
  const double rho = 0.8644276372259277;  // |eigenvalue| of A
  for (int t : {1, 3}) {
    const auto b = jsr_bounds({A}, t);
    CHECK(b.lower == doctest::Approx(rho).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(rho).epsilon(1e-8));
    CHECK(b.lower <= b.upper + 1e-12);
  }
}

TEST_CASE("jsr bracket of the running pair") {
  const auto b = jsr_bounds(running_modes(), 4);
  CHECK(b.lower == doctest::Approx(0.9000114766).epsilon(1e-6));
  CHECK(b.upper >= b.lower);
  CHECK(b.upper < 1.0);

  const auto gate = certify_stability(running_modes(), 8);
  CHECK(gate.certified);
}

TEST_CASE("lifted jsr lower bound is the square of the original") {
  LiftBasis basis(2, {2});
  const auto sys = lift_matrix_set(running_modes(), basis);
  const auto b1 = jsr_bounds(running_modes(), 4);
  const auto b2 = jsr_bounds(sys.lifted, 4);
  CHECK(b2.lower == doctest::Approx(b1.lower * b1.lower).epsilon(1e-8));
}

TEST_CASE("mixed-degree lift takes the max over the block powers") {
  LiftBasis basis(2, {1, 2});
  const auto sys = lift_matrix_set(running_modes(), basis);
  const auto b1 = jsr_bounds(running_modes(), 4);
  const auto bm = jsr_bounds(sys.lifted, 4);
  const double expect = std::max(b1.lower, b1.lower * b1.lower);
  CHECK(bm.lower == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("jsr enumeration budget is enforced") {
  CHECK_THROWS_AS(jsr_bounds(running_modes(), 21), std::invalid_argument);
}

TEST_CASE("sos certifies a scaled copy redundant") {
  const std::vector<Polynomial> polys{circle(1.0), circle(0.5)};
  const auto cert = sos_redundancy(polys, 1, 2);
  REQUIRE(cert.solver_converged);
  CHECK(cert.verdict == SOSVerdict::kRedundant);
  CHECK(cert.epsilon_star <= 0.5 + 1e-6);
  CHECK(cert.identity_residual <= kIdentityResidualTol);

  // soundness via a dense grid: no feasible point of the remaining system
  // violates the removed constraint
  for (int i = -50; i <= 50; ++i)
    for (int j = -50; j <= 50; ++j) {
      VectorXd x(2);
      x << i / 25.0, j / 25.0;
      if (polys[0].eval(x) <= 1.0) CHECK(polys[1].eval(x) <= 1.0 + 1e-6);
    }
}

TEST_CASE("independent variables stay inconclusive") {
  Polynomial c1(2), c2(2);
  c1.add_term({2, 0}, 1.0);
  c2.add_term({0, 2}, 1.0);
  const auto cert = sos_redundancy({c1, c2}, 0, 2);
  CHECK(cert.verdict == SOSVerdict::kInconclusive);
  const auto cert4 = sos_redundancy({c1, c2}, 0, 4);
  CHECK(cert4.verdict == SOSVerdict::kInconclusive);
}

TEST_CASE("an exact duplicate sits on the marginal band") {
  const std::vector<Polynomial> polys{circle(), circle()};
  const auto cert = sos_redundancy(polys, 1, 2);
  if (cert.solver_converged) {
    CHECK(cert.epsilon_star == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(cert.verdict == SOSVerdict::kInconclusive);
  }
}

TEST_CASE("minimal_semialgebraic removes duplicates and certified rows") {
  SUBCASE("single constraint unchanged") {
    const auto md = minimal_semialgebraic({circle()});
    CHECK(md.kept.size() == 1);
    CHECK(md.removed.empty());
  }
  SUBCASE("duplicate dropped without an SDP") {
    const auto md = minimal_semialgebraic({circle(), circle()});
    REQUIRE(md.kept.size() == 1);
    REQUIRE(md.removed.size() == 1);
    CHECK(md.removed[0] == 1);
    CHECK(md.certificates[0].exact_duplicate);
  }
  SUBCASE("scaled copy removed via the SDP") {
    const auto md = minimal_semialgebraic({circle(1.0), circle(0.5)});
    REQUIRE(md.kept.size() == 1);
    CHECK(md.removed == std::vector<int>{1});
    CHECK_FALSE(md.certificates[0].exact_duplicate);
    CHECK(md.certificates[0].identity_residual <= kIdentityResidualTol);
  }
}

TEST_CASE("certificate gram matrices reproduce the identity") {
  Polynomial box1(2), box2(2);
  box1.add_term({2, 0}, 1.0);
  box2.add_term({0, 2}, 1.0);
  Polynomial target(2);  // (x1 + x2)^2 / 2 <= 1 given x1^2 <= 1, x2^2 <= 1
  target.add_term({2, 0}, 0.5);
  target.add_term({1, 1}, 1.0);
  target.add_term({0, 2}, 0.5);
  const auto cert = sos_implication({box1, box2}, target, 2);
  REQUIRE(cert.solver_converged);
  CHECK(cert.identity_residual <= kIdentityResidualTol);
  for (const auto& Q : cert.gram_matrices) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -kPsdTol);
  }
}
