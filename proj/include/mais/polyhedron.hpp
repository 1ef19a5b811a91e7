#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mais/linprog.hpp"

namespace mais {

/// H-representation {y : A y <= b}. Immutable value type.
class HPolyhedron {
 public:
  HPolyhedron() = default;
  HPolyhedron(Eigen::MatrixXd A, Eigen::VectorXd b);

  /// Rows G y <= 1.
  static HPolyhedron with_unit_rhs(Eigen::MatrixXd G);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }
  int rows() const { return static_cast<int>(A_.rows()); }
  int dim() const { return static_cast<int>(A_.cols()); }

  bool has_unit_rhs(double tol = 1e-12) const;
  bool contains_point(const Eigen::VectorXd& y, double tol = kLPTol) const;

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

/// Axis-aligned box lo <= y <= hi, used for the bounded stop criteria.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  HPolyhedron to_polyhedron() const;  // 2N rows
  int dim() const { return static_cast<int>(lo.size()); }
};

struct LPOutcome {
  LPStatus status;
  double objective = 0.0;
  Eigen::VectorXd point;
};

/// max c.y over P.
LPOutcome support(const HPolyhedron& P, const Eigen::VectorXd& c);

/// max c.y over P intersected with a box (always bounded).
LPOutcome support_in_box(const HPolyhedron& P, const Eigen::VectorXd& c, const Box& B);

/// Pre-image {y : A_j y in P for all j}: rows of P stacked against every
/// mode, mode-major, p*M rows, no reduction. Requires unit RHS.
HPolyhedron preimage(const HPolyhedron& P, const std::vector<Eigen::MatrixXd>& lifted);

/// Row concatenation.
HPolyhedron intersect(const HPolyhedron& P, const HPolyhedron& Q);

struct RedundancyOutcome {
  bool redundant;
  bool empty_rest = false;  // remaining system infeasible (empty set)
};

/// Is row j implied by the other rows? Ties (optimum == b_j within kLPTol)
/// count as redundant; an unbounded LP means not redundant.
RedundancyOutcome is_redundant(const HPolyhedron& P, int j);

/// Minimal sub-description with the same set. Scans rows first-to-last and
/// drops each redundant one against the current survivors; deterministic.
HPolyhedron remove_redundancy(const HPolyhedron& P);

/// Same, also reporting which original row indices were kept.
std::pair<HPolyhedron, std::vector<int>> remove_redundancy_indexed(const HPolyhedron& P);

struct Containment {
  bool holds;
  bool vacuous = false;  // Q empty
};

/// Q subset of P, by maximizing each row of P over Q; unbounded -> false.
Containment contains(const HPolyhedron& P, const HPolyhedron& Q);

/// Q cap B subset of P cap B (bounded LPs).
Containment contains_on(const HPolyhedron& P, const HPolyhedron& Q, const Box& B);

/// P cap B == Q cap B via mutual containment.
bool equal_on(const HPolyhedron& P, const HPolyhedron& Q, const Box& B);

}  // namespace mais
