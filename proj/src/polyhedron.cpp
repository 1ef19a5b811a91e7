#include "mais/polyhedron.hpp"

#include <stdexcept>

namespace mais {

HPolyhedron::HPolyhedron(Eigen::MatrixXd A, Eigen::VectorXd b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw std::invalid_argument("HPolyhedron: row mismatch");
  if (A_.rows() < 1) throw std::invalid_argument("HPolyhedron: needs at least one row");
}

HPolyhedron HPolyhedron::with_unit_rhs(Eigen::MatrixXd G) {
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(G.rows());
  return HPolyhedron(std::move(G), std::move(ones));
}

bool HPolyhedron::has_unit_rhs(double tol) const {
  return (b_.array() - 1.0).abs().maxCoeff() <= tol;
}

bool HPolyhedron::contains_point(const Eigen::VectorXd& y, double tol) const {
  return ((A_ * y - b_).array() <= tol).all();
}

HPolyhedron Box::to_polyhedron() const {
  const int n = dim();
  Eigen::MatrixXd A(2 * n, n);
  Eigen::VectorXd b(2 * n);
  A.topRows(n) = Eigen::MatrixXd::Identity(n, n);
  A.bottomRows(n) = -Eigen::MatrixXd::Identity(n, n);
  b.head(n) = hi;
  b.tail(n) = -lo;
  return HPolyhedron(A, b);
}

LPOutcome support(const HPolyhedron& P, const Eigen::VectorXd& c) {
  if (c.size() != P.dim()) throw std::invalid_argument("support: dimension mismatch");
  LPResult r = lp_maximize(c, P.A(), P.b());
  return {r.status, r.objective, r.x};
}

LPOutcome support_in_box(const HPolyhedron& P, const Eigen::VectorXd& c, const Box& B) {
  return support(intersect(P, B.to_polyhedron()), c);
}

HPolyhedron preimage(const HPolyhedron& P, const std::vector<Eigen::MatrixXd>& lifted) {
  if (!P.has_unit_rhs()) throw std::invalid_argument("preimage: RHS must be all ones");
  if (lifted.empty()) throw std::invalid_argument("preimage: empty system");
  const int N = P.dim();
  const int p = P.rows();
  const int M = static_cast<int>(lifted.size());
  for (const auto& L : lifted)
    if (L.rows() != N || L.cols() != N)
      throw std::invalid_argument("preimage: lifted matrix dimension mismatch");
  Eigen::MatrixXd G(p * M, N);
  for (int j = 0; j < M; ++j) G.middleRows(j * p, p) = P.A() * lifted[j];
  return HPolyhedron::with_unit_rhs(std::move(G));
}

HPolyhedron intersect(const HPolyhedron& P, const HPolyhedron& Q) {
  if (P.dim() != Q.dim()) throw std::invalid_argument("intersect: dimension mismatch");
  Eigen::MatrixXd A(P.rows() + Q.rows(), P.dim());
  Eigen::VectorXd b(P.rows() + Q.rows());
  A << P.A(), Q.A();
  b << P.b(), Q.b();
  return HPolyhedron(std::move(A), std::move(b));
}

namespace {

HPolyhedron drop_row(const HPolyhedron& P, int j) {
  const int p = P.rows();
  Eigen::MatrixXd A(p - 1, P.dim());
  Eigen::VectorXd b(p - 1);
  A.topRows(j) = P.A().topRows(j);
  b.head(j) = P.b().head(j);
  A.bottomRows(p - 1 - j) = P.A().bottomRows(p - 1 - j);
  b.tail(p - 1 - j) = P.b().tail(p - 1 - j);
  return HPolyhedron(std::move(A), std::move(b));
}

}  // namespace

RedundancyOutcome is_redundant(const HPolyhedron& P, int j) {
  if (P.rows() < 2) throw std::invalid_argument("is_redundant: needs >= 2 rows");
  if (j < 0 || j >= P.rows()) throw std::invalid_argument("is_redundant: bad index");
  const HPolyhedron rest = drop_row(P, j);
  const LPOutcome out = support(rest, P.A().row(j).transpose());
  if (out.status == LPStatus::kUnbounded) return {false, false};
  if (out.status == LPStatus::kInfeasible) return {true, true};  // empty set
  return {out.objective <= P.b()[j] + kLPTol, false};
}

std::pair<HPolyhedron, std::vector<int>> remove_redundancy_indexed(const HPolyhedron& P) {
  HPolyhedron cur = P;
  std::vector<int> kept(P.rows());
  for (int i = 0; i < P.rows(); ++i) kept[i] = i;
  int i = 0;
  while (i < cur.rows() && cur.rows() > 1) {
    if (is_redundant(cur, i).redundant) {
      cur = drop_row(cur, i);
      kept.erase(kept.begin() + i);
    } else {
      ++i;
    }
  }
  return {cur, kept};
}

HPolyhedron remove_redundancy(const HPolyhedron& P) {
  return remove_redundancy_indexed(P).first;
}

Containment contains(const HPolyhedron& P, const HPolyhedron& Q) {
  if (P.dim() != Q.dim()) throw std::invalid_argument("contains: dimension mismatch");
  bool vacuous_checked = false;
  for (int i = 0; i < P.rows(); ++i) {
    const LPOutcome out = support(Q, P.A().row(i).transpose());
    if (out.status == LPStatus::kInfeasible) return {true, true};  // Q empty
    if (out.status == LPStatus::kUnbounded) return {false, vacuous_checked};
    if (out.objective > P.b()[i] + kLPTol) return {false, false};
  }
  return {true, false};
}

Containment contains_on(const HPolyhedron& P, const HPolyhedron& Q, const Box& B) {
  return contains(P, intersect(Q, B.to_polyhedron()));
}

bool equal_on(const HPolyhedron& P, const HPolyhedron& Q, const Box& B) {
  return contains_on(P, Q, B).holds && contains_on(Q, P, B).holds;
}

}  // namespace mais
