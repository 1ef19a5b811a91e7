#include "mais/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace mais {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double block_inner(const MatrixXd& A, const MatrixXd& B) {
  if (A.size() == 0 || B.size() == 0) return 0.0;
  return (A.array() * B.array()).sum();
}

// largest step alpha in [0, 1] keeping S + alpha*D positive definite,
// via the smallest eigenvalue of L^-1 D L^-T
double max_step(const MatrixXd& S, const MatrixXd& D) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd L = llt.matrixL();
  MatrixXd W = L.triangularView<Eigen::Lower>().solve(D);
  W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (W + W.transpose()),
                                             Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1.0;
  return std::min(1.0, -0.98 / lmin);
}

}  // namespace

SDPResult solve_sdp(const SDPProblem& prob, const SDPOptions& opts) {
  const int nb = static_cast<int>(prob.block_sizes.size());
  const int m = static_cast<int>(prob.b.size());
  if (static_cast<int>(prob.A.size()) != m) throw std::invalid_argument("sdp: A rows");
  if (static_cast<int>(prob.C.size()) != nb) throw std::invalid_argument("sdp: C blocks");

  int total_dim = 0;
  for (int s : prob.block_sizes) total_dim += s;

  double data_scale = 1.0 + prob.b.cwiseAbs().maxCoeff();
  for (const auto& Cj : prob.C)
    if (Cj.size() > 0) data_scale = std::max(data_scale, Cj.cwiseAbs().maxCoeff());

  auto zero_blocks = [&] {
    std::vector<MatrixXd> v(nb);
    for (int j = 0; j < nb; ++j)
      v[j] = MatrixXd::Zero(prob.block_sizes[j], prob.block_sizes[j]);
    return v;
  };

  // constraint block accessor tolerating empty (zero) blocks
  auto Ak = [&](int k, int j) -> const MatrixXd& {
    static const MatrixXd empty;
    const auto& row = prob.A[k];
    if (j >= static_cast<int>(row.size()) || row[j].size() == 0) return empty;
    return row[j];
  };

  std::vector<MatrixXd> X = zero_blocks(), Z = zero_blocks();
  const double tau = data_scale;
  for (int j = 0; j < nb; ++j) {
    X[j].diagonal().setConstant(tau);
    Z[j].diagonal().setConstant(tau);
  }
  VectorXd y = VectorXd::Zero(m);

  SDPResult res;
  std::vector<MatrixXd> Zinv(nb), Rd(nb), dXa(nb), dZa(nb), dX(nb), dZ(nb);

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    // residuals
    VectorXd rp = prob.b;
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < nb; ++j) rp[k] -= block_inner(Ak(k, j), X[j]);
    double rd_norm = 0.0;
    for (int j = 0; j < nb; ++j) {
      MatrixXd R = (prob.C[j].size() ? prob.C[j]
                                     : MatrixXd::Zero(prob.block_sizes[j], prob.block_sizes[j]));
      for (int k = 0; k < m; ++k)
        if (Ak(k, j).size()) R -= y[k] * Ak(k, j);
      R -= Z[j];
      Rd[j] = R;
      if (R.size()) rd_norm = std::max(rd_norm, R.cwiseAbs().maxCoeff());
    }
    double gap = 0.0, pobj = 0.0;
    for (int j = 0; j < nb; ++j) {
      gap += block_inner(X[j], Z[j]);
      if (prob.C[j].size()) pobj += block_inner(prob.C[j], X[j]);
    }
    const double mu = gap / std::max(1, total_dim);
    const double rp_norm = rp.size() ? rp.cwiseAbs().maxCoeff() : 0.0;

    res.objective = pobj;
    res.primal_residual = rp_norm;
    res.dual_residual = rd_norm;
    res.duality_gap = gap;
    res.iterations = iter - 1;
    if (rp_norm <= opts.feas_tol * data_scale && rd_norm <= opts.feas_tol * data_scale &&
        gap <= opts.gap_tol * (1.0 + std::abs(pobj))) {
      res.converged = true;
      res.X = X;
      res.y = y;
      return res;
    }
    if (!std::isfinite(mu) || mu > 1e14 * data_scale) break;

    // factor Z
    bool ok = true;
    for (int j = 0; j < nb; ++j) {
      Eigen::LLT<MatrixXd> llt(Z[j]);
      if (llt.info() != Eigen::Success) { ok = false; break; }
      Zinv[j] = llt.solve(MatrixXd::Identity(prob.block_sizes[j], prob.block_sizes[j]));
    }
    if (!ok) break;

    // Schur complement M_kl = sum_j tr(A_k X A_l Zinv)
    MatrixXd M = MatrixXd::Zero(m, m);
    std::vector<std::vector<MatrixXd>> XAZ(m);  // per l: X A_l Zinv blocks
    for (int l = 0; l < m; ++l) {
      XAZ[l].resize(nb);
      for (int j = 0; j < nb; ++j)
        if (Ak(l, j).size()) XAZ[l][j] = X[j] * Ak(l, j) * Zinv[j];
    }
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        double s = 0.0;
        for (int j = 0; j < nb; ++j)
          if (Ak(k, j).size() && XAZ[l][j].size()) s += block_inner(Ak(k, j), XAZ[l][j]);
        M(k, l) = s;
      }
    M.diagonal().array() += 1e-13 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
    Eigen::FullPivLU<MatrixXd> lu(M);

    auto solve_direction = [&](double sigma_mu, const std::vector<MatrixXd>* corr,
                               std::vector<MatrixXd>& dX_out, VectorXd& dy_out,
                               std::vector<MatrixXd>& dZ_out) {
      VectorXd rhs = rp;
      for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int j = 0; j < nb; ++j) {
          if (!Ak(k, j).size()) continue;
          s -= sigma_mu * block_inner(Ak(k, j), Zinv[j]);
          s += block_inner(Ak(k, j), X[j]);
          s += block_inner(Ak(k, j), (X[j] * Rd[j] * Zinv[j]).eval());
          if (corr) s += block_inner(Ak(k, j), ((*corr)[j] * Zinv[j]).eval());
        }
        rhs[k] += s;
      }
      dy_out = lu.solve(rhs);
      for (int j = 0; j < nb; ++j) {
        MatrixXd dz = Rd[j];
        for (int k = 0; k < m; ++k)
          if (Ak(k, j).size()) dz -= dy_out[k] * Ak(k, j);
        dZ_out[j] = 0.5 * (dz + dz.transpose());
        MatrixXd dx = sigma_mu * Zinv[j] - X[j] - X[j] * dZ_out[j] * Zinv[j];
        if (corr) dx -= (*corr)[j] * Zinv[j];
        dX_out[j] = 0.5 * (dx + dx.transpose());
      }
    };

    // predictor
    VectorXd dya(m);
    solve_direction(0.0, nullptr, dXa, dya, dZa);
    double ap = 1.0, ad = 1.0;
    for (int j = 0; j < nb; ++j) {
      ap = std::min(ap, max_step(X[j], dXa[j]));
      ad = std::min(ad, max_step(Z[j], dZa[j]));
    }
    double gap_aff = 0.0;
    for (int j = 0; j < nb; ++j)
      gap_aff += block_inner(X[j] + ap * dXa[j], Z[j] + ad * dZa[j]);
    double sigma = std::pow(std::max(0.0, gap_aff) / std::max(gap, 1e-300), 3.0);
    sigma = std::min(0.99, std::max(1e-6, sigma));

    // corrector with Mehrotra term dXa * dZa
    std::vector<MatrixXd> corr(nb);
    for (int j = 0; j < nb; ++j) corr[j] = dXa[j] * dZa[j];
    VectorXd dy(m);
    solve_direction(sigma * mu, &corr, dX, dy, dZ);
    ap = 1.0;
    ad = 1.0;
    for (int j = 0; j < nb; ++j) {
      ap = std::min(ap, max_step(X[j], dX[j]));
      ad = std::min(ad, max_step(Z[j], dZ[j]));
    }
    ap *= 0.98;
    ad *= 0.98;
    if (ap < 1e-10 && ad < 1e-10) break;
    for (int j = 0; j < nb; ++j) {
      X[j] += ap * dX[j];
      Z[j] += ad * dZ[j];
    }
    y += ad * dy;
  }

  res.converged = false;
  res.X = X;
  res.y = y;
  return res;
}

}  // namespace mais
