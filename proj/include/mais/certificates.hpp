#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mais/lift.hpp"
#include "mais/polynomial.hpp"
#include "mais/sdp.hpp"

namespace mais {

inline constexpr double kPsdTol = 1e-7;
inline constexpr double kIdentityResidualTol = 1e-6;
inline constexpr double kMarginalBand = 1e-6;

/// Nonnegative matrices H_i with G A_i = H_i G and row sums bounded by
/// epsilon; epsilon <= 1 certifies invariance of the lowered set.
struct InvarianceCertificate {
  std::vector<Eigen::MatrixXd> H;
  double epsilon = 0.0;
  double residual = 0.0;  // max |G A_i - H_i G|
};

struct InvarianceOutcome {
  bool feasible = false;
  std::optional<InvarianceCertificate> certificate;
  bool invariant() const {
    return feasible && certificate && certificate->epsilon <= 1.0 + kLPTol;
  }
};

/// Linear program of the invariance conditions: minimize epsilon subject to
/// G A_i^[L] = H_i G, H_i >= 0, H_i 1 <= epsilon 1. Sufficient only; an
/// infeasible program certifies nothing about the original set.
InvarianceOutcome check_invariance(const Eigen::MatrixXd& G, const LiftedMatrixSet& sys);

struct SpectralBounds {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;
};

/// Brute-force joint spectral radius bracket from all products of length t:
/// lower = max rho(P)^(1/t); upper = max |P|^(1/t) where the norm is the
/// spectral norm, preconditioned by the eigenbasis of the best product (any
/// fixed similarity yields a valid matrix norm, and this one makes the bound
/// exact for a single normal matrix).
SpectralBounds jsr_bounds(const std::vector<Eigen::MatrixXd>& mats, int depth);

struct StabilityGate {
  bool certified = false;
  SpectralBounds bounds;  // tightest bracket reached
};

/// Escalates the product depth 1, 2, 4, ... up to max_depth until the upper
/// bound drops below one.
StabilityGate certify_stability(const std::vector<Eigen::MatrixXd>& mats, int max_depth);

enum class SOSVerdict { kRedundant, kInconclusive };

struct RedundancyCertificate {
  int index = -1;               // constraint tested
  SOSVerdict verdict = SOSVerdict::kInconclusive;
  double epsilon_star = 0.0;    // meaningful when the solver converged
  int multiplier_degree = 0;    // max degree of the s_i
  int identity_degree = 0;      // total degree of the matched identity
  double identity_residual = 0.0;
  bool solver_converged = false;
  bool exact_duplicate = false;  // removed as a coefficientwise duplicate, no SDP
  std::vector<Eigen::MatrixXd> gram_matrices;  // s_0 first, then each s_i
};

/// Positivstellensatz implication test: does {c_i <= 1 for all i} imply
/// target <= 1?  Solves  min eps  s.t.  eps - target = s_0^2 + sum s_i^2 (1 - c_i)
/// with SOS multipliers truncated to identity degree D. The returned
/// certificate is re-verified independently of the solver (Gram PSD within
/// kPsdTol, polynomial identity residual within kIdentityResidualTol);
/// a certificate that fails verification is reported inconclusive.
RedundancyCertificate sos_implication(const std::vector<Polynomial>& constraints,
                                      const Polynomial& target, int identity_degree);

/// Redundancy of polys[j] within the semi-algebraic description polys.
RedundancyCertificate sos_redundancy(const std::vector<Polynomial>& polys, int j,
                                     int identity_degree);

/// Smallest admissible identity degree for a constraint family (even, at
/// least the maximum constraint degree); degree-0 multipliers at this level.
int default_identity_degree(const std::vector<Polynomial>& polys);

struct MinimalDescription {
  std::vector<Polynomial> kept;
  std::vector<int> removed;  // original indices, in removal order
  std::vector<RedundancyCertificate> certificates;  // one per removed row
};

/// Iteratively removes SOS-certified redundant polynomials, rescanning from
/// the start after each removal; exact duplicates are dropped first. Rows
/// whose test fails or is inconclusive are kept. Degrees escalate by 2 from
/// the default up to max_identity_degree.
MinimalDescription minimal_semialgebraic(const std::vector<Polynomial>& polys,
                                         int max_identity_degree = 0);

}  // namespace mais
