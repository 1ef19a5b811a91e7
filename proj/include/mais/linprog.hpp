#pragma once

#include <Eigen/Dense>

namespace mais {

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };

struct LPResult {
  LPStatus status;
  double objective = 0.0;   // valid when optimal
  Eigen::VectorXd x;        // valid when optimal
};

/// Solver feasibility / tie tolerance used across polyhedral operations.
inline constexpr double kLPTol = 1e-9;

/// maximize c.x  subject to  A x <= b,  Aeq x = beq,  x free.
///
/// Dense two-phase simplex with Bland's rule; deterministic. A solver
/// breakdown (pivot limit, inconsistent final state) throws std::runtime_error
/// rather than returning a status.
LPResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b,
                     const Eigen::MatrixXd& Aeq = Eigen::MatrixXd(),
                     const Eigen::VectorXd& beq = Eigen::VectorXd());

/// Same, but variables listed in `nonneg` are constrained to x_i >= 0.
LPResult lp_maximize_mixed(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                           const Eigen::VectorXd& b, const Eigen::MatrixXd& Aeq,
                           const Eigen::VectorXd& beq,
                           const std::vector<bool>& nonneg);

}  // namespace mais
