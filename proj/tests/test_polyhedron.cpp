#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mais/lift.hpp"
#include "mais/polyhedron.hpp"

using namespace mais;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

HPolyhedron unit_box(int n) {
  Box B;
  B.lo = -VectorXd::Ones(n);
  B.hi = VectorXd::Ones(n);
  return B.to_polyhedron();
}

// brute-force vertex enumeration in R^3: all 3-subsets of rows
std::vector<VectorXd> vertices3(const MatrixXd& A, const VectorXd& b) {
  std::vector<VectorXd> out;
  const int p = static_cast<int>(A.rows());
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      for (int k = j + 1; k < p; ++k) {
        MatrixXd M(3, 3);
        M << A.row(i), A.row(j), A.row(k);
        Eigen::FullPivLU<MatrixXd> lu(M);
        if (!lu.isInvertible()) continue;
        VectorXd rhs(3);
        rhs << b[i], b[j], b[k];
        const VectorXd v = lu.solve(rhs);
        if (((A * v - b).array() <= 1e-7).all()) out.push_back(v);
      }
  return out;
}

// oracle redundancy reduction with the same first-to-last scan semantics,
// valid for bounded 3-D polyhedra
int oracle_reduced_rows(MatrixXd A, VectorXd b) {
  int i = 0;
  while (i < A.rows() && A.rows() > 1) {
    MatrixXd Ar(A.rows() - 1, A.cols());
    VectorXd br(A.rows() - 1);
    Ar << A.topRows(i), A.bottomRows(A.rows() - 1 - i);
    br << b.head(i), b.tail(b.size() - 1 - i);
    double best = -1e300;
    for (const auto& v : vertices3(Ar, br)) best = std::max(best, A.row(i).dot(v));
    if (best <= b[i] + 1e-7) {
      A = Ar;
      b = br;
    } else {
      ++i;
    }
  }
  return static_cast<int>(A.rows());
}

}  // namespace

TEST_CASE("support over reference sets") {
  const HPolyhedron box = unit_box(3);
  VectorXd c = VectorXd::Zero(3);
  c[0] = 1.0;
  auto out = support(box, c);
  REQUIRE(out.status == LPStatus::kOptimal);
  CHECK(out.objective == doctest::Approx(1.0));

  // empty set
  MatrixXd A(2, 2);
  A << 1, 0, -1, 0;
  VectorXd b(2);
  b << -1, -1;
  CHECK(support(HPolyhedron(A, b), VectorXd::Ones(2)).status == LPStatus::kInfeasible);

  // halfspace with an outward objective
  MatrixXd H(1, 2);
  H << 1, 0;
  VectorXd one = VectorXd::Ones(1);
  VectorXd up(2);
  up << -1, 0;
  CHECK(support(HPolyhedron(H, one), up).status == LPStatus::kUnbounded);
}

TEST_CASE("redundancy detection") {
  MatrixXd A(2, 2);
  A << 1, 0, 1, 0;
  VectorXd b(2);
  b << 1, 2;
  CHECK(is_redundant(HPolyhedron(A, b), 1).redundant);
  CHECK_FALSE(is_redundant(HPolyhedron(A, b), 0).redundant);

  // orthogonal halfspaces: neither redundant (LP unbounded)
  MatrixXd B(2, 2);
  B << 1, 0, 0, 1;
  CHECK_FALSE(is_redundant(HPolyhedron::with_unit_rhs(B), 0).redundant);
  CHECK_FALSE(is_redundant(HPolyhedron::with_unit_rhs(B), 1).redundant);
}

TEST_CASE("remove_redundancy is idempotent and sound") {
  MatrixXd A(5, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1, 0.5, 0.5;
  VectorXd b(5);
  b << 1, 1, 1, 1, 3;  // last row redundant
  const HPolyhedron P(A, b);
  const HPolyhedron R = remove_redundancy(P);
  CHECK(R.rows() == 4);
  CHECK(remove_redundancy(R).rows() == 4);
  CHECK(contains(R, P).holds);
  CHECK(contains(P, R).holds);

  // already minimal stays untouched
  const HPolyhedron box = unit_box(2);
  CHECK(remove_redundancy(box).rows() == 4);
}

TEST_CASE("touching rows are treated as redundant") {
  // x + y <= 2 touches the unit box corner without cutting
  MatrixXd A(5, 2);
  A << 1, 1, 1, 0, 0, 1, -1, 0, 0, -1;
  VectorXd b(5);
  b << 2, 1, 1, 1, 1;
  CHECK(is_redundant(HPolyhedron(A, b), 0).redundant);
}

TEST_CASE("preimage stacking") {
  LiftBasis basis(2, {2});
  MatrixXd A1(2, 2), A2(2, 2);
  A1 << 1.0425, 0.3416, -0.5893, 0.5839;
  A2 << 0.0, 0.65, 0.65, 0.0;
  const auto sys = lift_matrix_set({A1, A2}, basis);

  MatrixXd G(3, 3);
  G << 1, 0, 1, 1, 6, -4, -3, 10, 2;
  const HPolyhedron X = HPolyhedron::with_unit_rhs(G);
  const HPolyhedron pre = preimage(X, sys.lifted);
  CHECK(pre.rows() == 6);  // p * M
  CHECK((pre.A().topRows(3) - G * sys.lifted[0]).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((pre.A().bottomRows(3) - G * sys.lifted[1]).cwiseAbs().maxCoeff() < 1e-14);

  // identity system: preimage(P) == P
  const auto id = lift_matrix_set({MatrixXd::Identity(2, 2)}, basis);
  const HPolyhedron same = preimage(X, id.lifted);
  CHECK(contains(same, X).holds);
  CHECK(contains(X, same).holds);
}

TEST_CASE("reduced counts match a vertex-enumeration oracle in 3-D") {
  LiftBasis basis(2, {2});
  MatrixXd A1(2, 2), A2(2, 2);
  A1 << 1.0425, 0.3416, -0.5893, 0.5839;
  A2 << 0.0, 0.65, 0.65, 0.0;
  const auto sys = lift_matrix_set({A1, A2}, basis);
  MatrixXd G(3, 3);
  G << 1, 0, 1, 1, 6, -4, -3, 10, 2;
  const HPolyhedron X = HPolyhedron::with_unit_rhs(G);

  // bounded box from the running setup
  const double s2 = std::sqrt(2.0);
  Box B;
  B.lo.resize(3);
  B.hi.resize(3);
  B.lo << 0, -s2, 0;
  B.hi << 1, s2, 1;

  HPolyhedron Z = X;
  for (int it = 0; it < 3; ++it) {
    const HPolyhedron cand = intersect(intersect(preimage(Z, sys.lifted), X),
                                       B.to_polyhedron());
    const HPolyhedron red = remove_redundancy(cand);
    CHECK(red.rows() == oracle_reduced_rows(cand.A(), cand.b()));
    Z = remove_redundancy(intersect(preimage(Z, sys.lifted), X));
  }
}

TEST_CASE("redundancy over an empty remainder raises the flag") {
  // rows 0 and 1 contradict; any further row is vacuously redundant
  MatrixXd A(3, 2);
  A << 1, 0, -1, 0, 0, 1;
  VectorXd b(3);
  b << -1, -2, 1;
  const auto out = is_redundant(HPolyhedron(A, b), 2);
  CHECK(out.redundant);
  CHECK(out.empty_rest);
}

TEST_CASE("containment of an unbounded set fails via the unbounded LP") {
  MatrixXd H(1, 2);
  H << 1, 0;
  const auto c = contains(unit_box(2), HPolyhedron::with_unit_rhs(H));
  CHECK_FALSE(c.holds);
}

TEST_CASE("containment checks") {
  const HPolyhedron box = unit_box(2);
  CHECK(contains(box, box).holds);

  MatrixXd A2x = 0.5 * box.A();
  const HPolyhedron big(A2x, box.b());  // |x|_inf <= 2
  CHECK(contains(big, box).holds);
  CHECK_FALSE(contains(box, big).holds);

  // empty set is vacuously contained
  MatrixXd E(2, 2);
  E << 1, 0, -1, 0;
  VectorXd be(2);
  be << -1, -1;
  const auto c = contains(box, HPolyhedron(E, be));
  CHECK(c.holds);
  CHECK(c.vacuous);
}

TEST_CASE("equal_on detects facet perturbations") {
  Box B;
  B.lo = -2 * VectorXd::Ones(2);
  B.hi = 2 * VectorXd::Ones(2);
  const HPolyhedron P = unit_box(2);
  CHECK(equal_on(P, P, B));

  MatrixXd A = P.A();
  VectorXd b = P.b();
  b[0] += 1e-3;
  CHECK_FALSE(equal_on(P, HPolyhedron(A, b), B));
}

TEST_CASE("preimage distributes over intersection (random property)") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 3;
    MatrixXd L1(N, N), L2(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        L1(i, j) = 0.6 * u(rng);
        L2(i, j) = 0.6 * u(rng);
      }
    const std::vector<MatrixXd> sys{L1, L2};
    MatrixXd GY(2, N), GZ(2, N);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < N; ++j) {
        GY(i, j) = u(rng);
        GZ(i, j) = u(rng);
      }
    const HPolyhedron Y = HPolyhedron::with_unit_rhs(GY);
    const HPolyhedron Z = HPolyhedron::with_unit_rhs(GZ);
    const HPolyhedron lhs = preimage(intersect(Y, Z), sys);
    const HPolyhedron rhs = intersect(preimage(Y, sys), preimage(Z, sys));
    CHECK(contains(lhs, rhs).holds);
    CHECK(contains(rhs, lhs).holds);
  }
}
