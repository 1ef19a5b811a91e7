#include "mais/linprog.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mais {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kMaxPivots = 50000;

// Full-tableau simplex on: minimize cost over {T x = rhs, x >= 0} given a
// starting basis whose columns form the identity in T. Bland's rule.
// Returns false when the problem is unbounded (phase 2 only).
bool run_simplex(Eigen::MatrixXd& T, Eigen::VectorXd& rhs, Eigen::VectorXd& cost,
                 std::vector<int>& basis, double& objective, int ncols) {
  const int m = static_cast<int>(T.rows());
  // reduced costs: cost row already reduced w.r.t. the basis by caller
  for (int pivots = 0; pivots < kMaxPivots; ++pivots) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (cost[j] < -kPivotTol) { enter = j; break; }  // Bland: first improving
    }
    if (enter < 0) return true;  // optimal
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > kPivotTol) {
        const double ratio = rhs[i] / T(i, enter);
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return false;  // unbounded
    // pivot on (leave, enter)
    const double piv = T(leave, enter);
    T.row(leave) /= piv;
    rhs[leave] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) {
        T.row(i) -= f * T.row(leave);
        rhs[i] -= f * rhs[leave];
        T(i, enter) = 0.0;
      }
    }
    const double fc = cost[enter];
    if (fc != 0.0) {
      cost -= fc * T.row(leave).transpose();
      objective -= fc * rhs[leave];
      cost[enter] = 0.0;
    }
    basis[leave] = enter;
  }
  throw std::runtime_error("simplex: pivot limit exceeded");
}

}  // namespace

LPResult lp_maximize_mixed(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                           const Eigen::VectorXd& b, const Eigen::MatrixXd& Aeq,
                           const Eigen::VectorXd& beq,
                           const std::vector<bool>& nonneg) {
  const int n = static_cast<int>(c.size());
  const int p = static_cast<int>(A.rows());
  const int q = static_cast<int>(Aeq.rows());
  if (p > 0 && A.cols() != n) throw std::invalid_argument("lp: A column mismatch");
  if (q > 0 && Aeq.cols() != n) throw std::invalid_argument("lp: Aeq column mismatch");
  if (b.size() != p || beq.size() != q) throw std::invalid_argument("lp: rhs size mismatch");
  if (static_cast<int>(nonneg.size()) != n) throw std::invalid_argument("lp: mask size");

  // structural columns: x_i >= 0 directly, or split u - v for free variables
  std::vector<int> pos_col(n), neg_col(n, -1);
  int ns = 0;
  for (int i = 0; i < n; ++i) {
    pos_col[i] = ns++;
    if (!nonneg[i]) neg_col[i] = ns++;
  }
  const int m = p + q;
  const int total = ns + p + m;  // structural + slacks + artificials
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, total);
  Eigen::VectorXd rhs(m);

  auto fill_row = [&](int r, const Eigen::VectorXd& row, double rv) {
    for (int i = 0; i < n; ++i) {
      T(r, pos_col[i]) = row[i];
      if (neg_col[i] >= 0) T(r, neg_col[i]) = -row[i];
    }
    rhs[r] = rv;
  };
  for (int r = 0; r < p; ++r) {
    fill_row(r, A.row(r).transpose(), b[r]);
    T(r, ns + r) = 1.0;  // slack
  }
  for (int r = 0; r < q; ++r) fill_row(p + r, Aeq.row(r).transpose(), beq[r]);

  // sign-normalize so rhs >= 0
  for (int r = 0; r < m; ++r) {
    if (rhs[r] < 0) {
      T.row(r) = -T.row(r);
      rhs[r] = -rhs[r];
    }
  }

  // initial basis: slack when usable (coefficient +1), otherwise artificial
  std::vector<int> basis(m, -1);
  std::vector<int> artificial_cols;
  for (int r = 0; r < m; ++r) {
    if (r < p && T(r, ns + r) == 1.0) {
      basis[r] = ns + r;
    } else {
      const int ac = ns + p + static_cast<int>(artificial_cols.size());
      T(r, ac) = 1.0;
      basis[r] = ac;
      artificial_cols.push_back(ac);
    }
  }
  const int first_artificial = ns + p;
  const int ncols_phase1 = ns + p + static_cast<int>(artificial_cols.size());

  // phase 1: minimize sum of artificials
  if (!artificial_cols.empty()) {
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
    for (int ac : artificial_cols) cost[ac] = 1.0;
    double obj = 0.0;
    for (int r = 0; r < m; ++r) {
      if (basis[r] >= first_artificial) {
        cost -= T.row(r).transpose();
        obj -= rhs[r];
      }
    }
    if (!run_simplex(T, rhs, cost, basis, obj, ncols_phase1))
      throw std::runtime_error("simplex: phase 1 unbounded");
    if (-obj > kLPTol) return {LPStatus::kInfeasible, 0.0, {}};
    // drive remaining artificials out of the basis
    for (int r = 0; r < m; ++r) {
      if (basis[r] < first_artificial) continue;
      int enter = -1;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(T(r, j)) > kPivotTol) { enter = j; break; }
      }
      if (enter < 0) continue;  // redundant row, stays with zero rhs
      const double piv = T(r, enter);
      T.row(r) /= piv;
      rhs[r] /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == r) continue;
        const double f = T(i, enter);
        if (f != 0.0) {
          T.row(i) -= f * T.row(r);
          rhs[i] -= f * rhs[r];
        }
      }
      basis[r] = enter;
    }
  }

  // phase 2: minimize -c; artificial columns are excluded from entering
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  for (int i = 0; i < n; ++i) {
    cost[pos_col[i]] = -c[i];
    if (neg_col[i] >= 0) cost[neg_col[i]] = c[i];
  }
  double obj = 0.0;
  for (int r = 0; r < m; ++r) {
    const double f = cost[basis[r]];
    if (f != 0.0) {
      cost -= f * T.row(r).transpose();
      obj -= f * rhs[r];
      cost[basis[r]] = 0.0;
    }
  }
  if (!run_simplex(T, rhs, cost, basis, obj, first_artificial))
    return {LPStatus::kUnbounded, 0.0, {}};

  Eigen::VectorXd full = Eigen::VectorXd::Zero(total);
  for (int r = 0; r < m; ++r) full[basis[r]] = rhs[r];
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = full[pos_col[i]];
    if (neg_col[i] >= 0) x[i] -= full[neg_col[i]];
  }
  // sanity: the tableau objective and the recomputed one must agree
  const double direct = c.dot(x);
  if (std::abs(direct - obj) > 1e-6 * (1.0 + std::abs(direct)))
    throw std::runtime_error("simplex: objective mismatch");
  if (p > 0 && ((A * x - b).maxCoeff() > 1e-7))
    throw std::runtime_error("simplex: primal infeasible result");
  if (q > 0 && ((Aeq * x - beq).cwiseAbs().maxCoeff() > 1e-7))
    throw std::runtime_error("simplex: equality residual");
  return {LPStatus::kOptimal, direct, x};
}

LPResult lp_maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                     const Eigen::VectorXd& b, const Eigen::MatrixXd& Aeq,
                     const Eigen::VectorXd& beq) {
  return lp_maximize_mixed(c, A, b, Aeq, beq,
                           std::vector<bool>(c.size(), false));
}

}  // namespace mais
