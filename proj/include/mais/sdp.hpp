#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mais {

/// Block-diagonal semidefinite program in primal standard form:
///   minimize    sum_j <C_j, X_j>
///   subject to  sum_j <A_kj, X_j> = b_k,   X_j PSD.
/// All data matrices are symmetric, one entry per block (zero blocks allowed
/// as empty matrices).
struct SDPProblem {
  std::vector<int> block_sizes;
  std::vector<Eigen::MatrixXd> C;
  std::vector<std::vector<Eigen::MatrixXd>> A;  // [constraint][block]
  Eigen::VectorXd b;
};

struct SDPResult {
  bool converged = false;
  double objective = 0.0;
  std::vector<Eigen::MatrixXd> X;
  Eigen::VectorXd y;
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

struct SDPOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-9;
  int max_iterations = 100;
};

/// Infeasible-start primal-dual interior point method (HKM direction with
/// Mehrotra predictor-corrector). Sized for the small problems this project
/// generates; non-convergence is reported, never thrown.
SDPResult solve_sdp(const SDPProblem& prob, const SDPOptions& opts = {});

}  // namespace mais
