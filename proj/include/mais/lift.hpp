#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mais/polynomial.hpp"
#include "mais/polyhedron.hpp"

namespace mais {

/// Ordered monomial basis of the lifted space R^N for a set of degrees L.
///
/// Coordinate order: degree blocks in increasing degree; inside the degree-1
/// block the coordinates are x_1..x_n (identity embedding); inside a block of
/// degree l >= 2 the exponent tuples are listed in ascending lexicographic
/// order, e.g. for n = 2, l = 2: x2^2, sqrt(2) x1 x2, x1^2.
/// Coordinate (l, alpha) of the lift of x carries sqrt(alpha!) * x^alpha.
class LiftBasis {
 public:
  LiftBasis(int n, std::vector<int> degrees);

  int state_dimension() const { return n_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int size() const { return static_cast<int>(coords_.size()); }

  const Exponents& exponents_at(int index) const { return coords_[index].second; }
  int degree_at(int index) const { return coords_[index].first; }
  double sqrt_multinomial_at(int index) const { return sqm_[index]; }

  /// Coordinate index of (degree, alpha); throws if absent.
  int index_of(int degree, const Exponents& alpha) const;
  bool has_degree(int degree) const;

  /// First coordinate index of a degree block and the block size.
  std::pair<int, int> block_of(int degree) const;

 private:
  int n_;
  std::vector<int> degrees_;
  std::vector<std::pair<int, Exponents>> coords_;
  std::vector<double> sqm_;
  std::unordered_map<std::string, int> lookup_;  // packed key -> index
};

/// All exponent tuples of total degree d over n variables, ascending lex.
std::vector<Exponents> exponent_tuples(int n, int d);

/// L-lift of a state vector; entry (l, alpha) is sqrt(alpha!) x^alpha.
Eigen::VectorXd lift_vector(const Eigen::VectorXd& x, const LiftBasis& basis);

/// Permanent of a square matrix (Ryser's formula).
double permanent(const Eigen::MatrixXd& M);

/// Block-diagonal L-lift of A: lift_vector(A x) == lift_matrix(A) * lift_vector(x).
/// Computed by symbolic expansion of (A x)^alpha.
Eigen::MatrixXd lift_matrix(const Eigen::MatrixXd& A, const LiftBasis& basis);

/// Entry of a single-degree lift via the permanent formula
/// perm(A(alpha,beta)) / sqrt(mu(alpha) mu(beta)); used as an independent
/// cross-check of lift_matrix.
double lift_matrix_entry_permanent(const Eigen::MatrixXd& A, const Exponents& alpha,
                                   const Exponents& beta);

/// A matrix set together with its L-lift.
struct LiftedMatrixSet {
  std::vector<Eigen::MatrixXd> original;
  std::vector<Eigen::MatrixXd> lifted;
};

LiftedMatrixSet lift_matrix_set(const std::vector<Eigen::MatrixXd>& mats,
                                const LiftBasis& basis);

/// Decompose constraint polynomials c_i (zero constant term, normalized
/// c_i <= 1) into the basis spanned by their monomial degrees and the vectors
/// g_i with g_i . lift_vector(x) == c_i(x).
struct ConstraintDecomposition {
  LiftBasis basis;
  std::vector<Eigen::VectorXd> g;
};

ConstraintDecomposition decompose_constraints(const std::vector<Polynomial>& polys);

/// Lowering of a unit-RHS polyhedron: row f becomes the polynomial
/// x -> f . lift_vector(x). Rows with positive non-unit RHS are normalized;
/// nonpositive RHS is rejected.
std::vector<Polynomial> lower_polyhedron(const HPolyhedron& P, const LiftBasis& basis);

/// Single row lowered to a polynomial (row RHS assumed already 1).
Polynomial lower_row(const Eigen::VectorXd& f, const LiftBasis& basis);

}  // namespace mais
