#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mais/certificates.hpp"
#include "mais/lift.hpp"
#include "mais/polyhedron.hpp"
#include "mais/polynomial.hpp"

namespace mais {

struct SwitchedSystem {
  int n = 0;
  std::vector<Eigen::MatrixXd> matrices;
};

/// Constraint set {x : c_i(x) <= 1} with normalized polynomials: zero
/// constant term, so the origin satisfies every constraint strictly.
struct SemiAlgebraicSet {
  std::vector<Polynomial> polynomials;
};

/// Normalize p(x) <= rhs to c(x) <= 1 by folding the constant term into the
/// right-hand side; requires rhs - p(0) > 0 (origin interior).
Polynomial normalize_constraint(const Polynomial& p, double rhs);

struct LiftedProblem {
  SwitchedSystem system;
  SemiAlgebraicSet constraints;
  LiftBasis basis;
  LiftedMatrixSet lifted;
  HPolyhedron X_lifted;  // rows g_i, RHS 1
};

LiftedProblem build_lifted_problem(const SwitchedSystem& sys, const SemiAlgebraicSet& X);

/// Box around the lifted image of a state box: per-monomial interval
/// arithmetic (exact for monomials over boxes), scaled by sqrt(alpha!).
/// With delta > 0 the lower bounds are pushed to min(-delta, lo) so the
/// origin lands in the interior.
Box box_from_state_bounds(const Eigen::VectorXd& x_min, const Eigen::VectorXd& x_max,
                          const LiftBasis& basis, double delta = 0.0);

/// Samples a grid over an inflated state box and rejects when a point of the
/// constraint set falls outside [x_min, x_max]; the witness rides on the
/// exception message.
void validate_state_box(const SemiAlgebraicSet& X, const Eigen::VectorXd& x_min,
                        const Eigen::VectorXd& x_max, int sample_budget = 10000);

struct IterationRecord {
  int index = 0;              // 1-based index of the computed set
  int rows_before = 0;        // before redundancy removal
  int rows_after = 0;
  int lp_calls = 0;           // linear programs solved this iteration
  bool monotone = true;       // Z_new subset of Z_old
  double seconds = 0.0;
  std::string note;
};

struct RunOptions {
  int algorithm = 2;
  int max_iter = 100;
  int jsr_depth = 8;
  double delta = 0.1;
  int sos_degree = 0;        // 0: default identity degree
  bool sos_reduction = true; // post-processing minimal description
  bool skip_stability_gate = false;
  bool debug_checks = false; // two-sided stop tests, reduction soundness
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(std::string msg, std::vector<IterationRecord> trace_)
      : std::runtime_error(std::move(msg)), trace(std::move(trace_)) {}
  std::vector<IterationRecord> trace;
};

struct StabilityGateFailure : std::runtime_error {
  StabilityGateFailure(std::string msg, SpectralBounds bounds_)
      : std::runtime_error(std::move(msg)), bounds(bounds_) {}
  SpectralBounds bounds;
};

struct InvariantSetResult {
  int algorithm = 0;
  /// Number of elements of the computed set sequence, counting the initial
  /// set: the stop test compares the sets with indices `iterations` and
  /// `iterations - 1` (1-based).
  int iterations = 0;
  HPolyhedron fixed_point;            // the set whose lowering describes M
  std::vector<Polynomial> polynomials;
  std::vector<bool> box_derived;      // per polynomial (algorithm 3)
  std::vector<Polynomial> reduced_polynomials;  // after SOS post-processing
  std::vector<RedundancyCertificate> sos_certificates;
  SpectralBounds jsr;
  std::vector<IterationRecord> trace;
  std::vector<std::string> notes;
  std::string stop_reason;
  Box box;                            // box used by the stop criterion
};

/// Core pre-image iteration Z_{k+1} = reduce(preimage(Z_k) cap S0) from an
/// arbitrary unit-RHS starting set, stopping when consecutive sets agree on
/// the given compact box. `iterations` counts the elements of the computed
/// chain including S0 itself; the non-convergence error carries the trace.
InvariantSetResult iterate(const LiftedProblem& problem, const HPolyhedron& S0,
                           const Box& stop_box, const RunOptions& options);

InvariantSetResult run_algorithm1(const LiftedProblem& problem, const Eigen::VectorXd& x_min,
                                  const Eigen::VectorXd& x_max, const RunOptions& options);
InvariantSetResult run_algorithm2(const LiftedProblem& problem, const Eigen::VectorXd& x_min,
                                  const Eigen::VectorXd& x_max, const RunOptions& options);
InvariantSetResult run_algorithm3(const LiftedProblem& problem, const Eigen::VectorXd& x_min,
                                  const Eigen::VectorXd& x_max, const RunOptions& options);

InvariantSetResult solve(const SwitchedSystem& sys, const SemiAlgebraicSet& X,
                         const Eigen::VectorXd& x_min, const Eigen::VectorXd& x_max,
                         const RunOptions& options);

struct VerificationReport {
  int inside_checked = 0;
  int outside_checked = 0;
  int boundary_skipped = 0;
  std::vector<Eigen::VectorXd> inside_violations;   // claimed member escapes X
  std::vector<Eigen::VectorXd> outside_violations;  // claimed non-member never exits
  bool clean() const { return inside_violations.empty() && outside_violations.empty(); }
};

/// Brute-force oracle. Classifies grid points of the state box: members of
/// the candidate set (all polynomials <= 1 - margin) must stay in X under
/// every switching sequence of length T; points of X outside the candidate
/// set (some polynomial >= 1 + margin) must leave X under some sequence of
/// length <= T. Points in the margin band are skipped.
VerificationReport verify_by_simulation(const SwitchedSystem& sys, const SemiAlgebraicSet& X,
                                        const std::vector<Polynomial>& invariant_set,
                                        const Eigen::VectorXd& x_min,
                                        const Eigen::VectorXd& x_max, int grid_resolution,
                                        int horizon, double margin = 1e-3);

struct ConvexityReport {
  bool convex = true;
  Eigen::VectorXd witness_a, witness_b;  // member endpoints with non-member midpoint
};

/// Samples random member pairs; midpoints must be members (margin 1e-9).
ConvexityReport convexity_check(const std::vector<Polynomial>& invariant_set,
                                const Eigen::VectorXd& x_min, const Eigen::VectorXd& x_max,
                                int samples, unsigned seed = 12345);

}  // namespace mais
