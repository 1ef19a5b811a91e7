#include "mais/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "mais/linprog.hpp"

namespace mais {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double spectral_radius(const MatrixXd& A) {
  Eigen::EigenSolver<MatrixXd> es(A, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_norm(const MatrixXd& A) {
  Eigen::JacobiSVD<MatrixXd> svd(A);
  return svd.singularValues()[0];
}

// Real basis assembled from the eigenvectors of P (a complex pair contributes
// its real and imaginary parts). Returns identity when defective or badly
// conditioned.
MatrixXd eigenbasis_preconditioner(const MatrixXd& P) {
  const int n = static_cast<int>(P.rows());
  Eigen::EigenSolver<MatrixXd> es(P);
  if (es.info() != Eigen::Success) return MatrixXd::Identity(n, n);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  MatrixXd T(n, n);
  std::vector<bool> used(n, false);
  int col = 0;
  const double scale = vals.cwiseAbs().maxCoeff() + 1.0;
  for (int i = 0; i < n && col < n; ++i) {
    if (used[i]) continue;
    if (std::abs(vals[i].imag()) <= 1e-10 * scale) {
      T.col(col++) = vecs.col(i).real();
      used[i] = true;
    } else {
      int partner = -1;
      for (int j = i + 1; j < n; ++j) {
        if (!used[j] && std::abs(vals[j] - std::conj(vals[i])) <= 1e-8 * scale) {
          partner = j;
          break;
        }
      }
      if (partner < 0) return MatrixXd::Identity(n, n);
      T.col(col++) = vecs.col(i).real();
      if (col < n) T.col(col++) = vecs.col(i).imag();
      used[i] = used[partner] = true;
    }
  }
  if (col != n) return MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<MatrixXd> svd(T);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 1e-8 * svd.singularValues().maxCoeff()) return MatrixXd::Identity(n, n);
  return T;
}

template <typename F>
void for_each_product(const std::vector<MatrixXd>& mats, int depth, F&& fn) {
  const int n = static_cast<int>(mats[0].rows());
  std::vector<MatrixXd> stack(depth + 1);
  stack[0] = MatrixXd::Identity(n, n);
  std::vector<int> idx(depth, 0);
  // depth-first enumeration reusing prefix products
  int level = 0;
  while (true) {
    if (level == depth) {
      fn(stack[depth]);
      // backtrack
      while (level > 0 && idx[level - 1] == static_cast<int>(mats.size()) - 1) {
        idx[--level] = 0;
      }
      if (level == 0) return;
      ++idx[level - 1];
      --level;
      // recompute from this level
    }
    stack[level + 1] = mats[idx[level]] * stack[level];
    ++level;
  }
}

}  // namespace

InvarianceOutcome check_invariance(const Eigen::MatrixXd& G, const LiftedMatrixSet& sys) {
  const int p = static_cast<int>(G.rows());
  const int N = static_cast<int>(G.cols());
  const int M = static_cast<int>(sys.lifted.size());
  if (M == 0) throw std::invalid_argument("check_invariance: empty system");
  for (const auto& L : sys.lifted)
    if (L.rows() != N || L.cols() != N)
      throw std::invalid_argument("check_invariance: dimension mismatch");

  // variables: eps, then H_i row-major; all nonnegative
  const int nv = 1 + M * p * p;
  auto hvar = [&](int i, int r, int c) { return 1 + i * p * p + r * p + c; };

  Eigen::MatrixXd Aeq = Eigen::MatrixXd::Zero(M * p * N, nv);
  Eigen::VectorXd beq(M * p * N);
  int eq = 0;
  for (int i = 0; i < M; ++i) {
    const MatrixXd GA = G * sys.lifted[i];
    for (int r = 0; r < p; ++r) {
      for (int k = 0; k < N; ++k) {
        for (int q = 0; q < p; ++q) Aeq(eq, hvar(i, r, q)) = G(q, k);
        beq[eq] = GA(r, k);
        ++eq;
      }
    }
  }
  Eigen::MatrixXd Ain = Eigen::MatrixXd::Zero(M * p, nv);
  Eigen::VectorXd bin = Eigen::VectorXd::Zero(M * p);
  for (int i = 0; i < M; ++i) {
    for (int r = 0; r < p; ++r) {
      for (int q = 0; q < p; ++q) Ain(i * p + r, hvar(i, r, q)) = 1.0;
      Ain(i * p + r, 0) = -1.0;
    }
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  c[0] = -1.0;  // maximize -eps

  const LPResult lp = lp_maximize_mixed(c, Ain, bin, Aeq, beq, std::vector<bool>(nv, true));
  if (lp.status != LPStatus::kOptimal) return {};

  InvarianceCertificate cert;
  cert.epsilon = lp.x[0];
  cert.H.reserve(M);
  double residual = 0.0;
  for (int i = 0; i < M; ++i) {
    MatrixXd H(p, p);
    for (int r = 0; r < p; ++r)
      for (int q = 0; q < p; ++q) H(r, q) = lp.x[hvar(i, r, q)];
    residual = std::max(residual, (G * sys.lifted[i] - H * G).cwiseAbs().maxCoeff());
    cert.H.push_back(std::move(H));
  }
  cert.residual = residual;
  if (residual > 1e-8)
    throw std::runtime_error("check_invariance: certificate residual out of tolerance");
  InvarianceOutcome out;
  out.feasible = true;
  out.certificate = std::move(cert);
  return out;
}

SpectralBounds jsr_bounds(const std::vector<Eigen::MatrixXd>& mats, int depth) {
  if (mats.empty()) throw std::invalid_argument("jsr_bounds: empty set");
  if (depth < 1) throw std::invalid_argument("jsr_bounds: depth must be >= 1");
  double count = std::pow(static_cast<double>(mats.size()), depth);
  if (count > 2e6) throw std::invalid_argument("jsr_bounds: enumeration budget exceeded");

  const double inv_t = 1.0 / depth;
  double lower = 0.0;
  MatrixXd best;
  for_each_product(mats, depth, [&](const MatrixXd& P) {
    const double r = std::pow(spectral_radius(P), inv_t);
    if (r > lower) {
      lower = r;
      best = P;
    }
  });

  double upper_plain = 0.0;
  for_each_product(mats, depth, [&](const MatrixXd& P) {
    upper_plain = std::max(upper_plain, std::pow(spectral_norm(P), inv_t));
  });

  double upper = upper_plain;
  if (best.size() > 0) {
    const MatrixXd T = eigenbasis_preconditioner(best);
    if (!T.isIdentity(0.0)) {
      const MatrixXd Tinv = T.inverse();
      double upper_pre = 0.0;
      for_each_product(mats, depth, [&](const MatrixXd& P) {
        upper_pre = std::max(upper_pre, std::pow(spectral_norm(Tinv * P * T), inv_t));
      });
      upper = std::min(upper, upper_pre);
    }
  }
  upper = std::max(upper, lower);  // a norm never undercuts the spectral radius
  return {lower, upper, depth};
}

StabilityGate certify_stability(const std::vector<Eigen::MatrixXd>& mats, int max_depth) {
  StabilityGate gate;
  int t = 1;
  while (true) {
    gate.bounds = jsr_bounds(mats, t);
    if (gate.bounds.upper < 1.0) {
      gate.certified = true;
      return gate;
    }
    if (gate.bounds.lower >= 1.0) return gate;  // genuinely unstable
    if (t >= max_depth) return gate;
    t = std::min(2 * t, max_depth);
  }
}

namespace {

std::vector<Exponents> monomials_up_to(int n, int d) {
  std::vector<Exponents> out;
  for (int k = 0; k <= d; ++k) {
    auto tk = exponent_tuples(n, k);
    out.insert(out.end(), tk.begin(), tk.end());
  }
  return out;
}

Polynomial gram_to_polynomial(const MatrixXd& Q, const std::vector<Exponents>& basis, int n) {
  Polynomial p(n);
  const int m = static_cast<int>(basis.size());
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (Q(a, b) == 0.0) continue;
      Exponents e(n);
      for (int i = 0; i < n; ++i) e[i] = basis[a][i] + basis[b][i];
      p.add_term(e, Q(a, b));
    }
  }
  return p;
}

}  // namespace

int default_identity_degree(const std::vector<Polynomial>& polys) {
  int d = 1;
  for (const auto& p : polys) d = std::max(d, p.max_degree());
  return d + (d % 2);
}

RedundancyCertificate sos_implication(const std::vector<Polynomial>& constraints,
                                      const Polynomial& target, int identity_degree) {
  if (constraints.empty())
    throw std::invalid_argument("sos_implication: empty constraint system");
  if (identity_degree < 2 || identity_degree % 2 != 0)
    throw std::invalid_argument("sos_implication: identity degree must be even and >= 2");
  const int n = target.dimension();
  const int D = std::max(identity_degree, target.max_degree() + target.max_degree() % 2);

  RedundancyCertificate cert;
  cert.identity_degree = D;

  // multiplier bases
  std::vector<Exponents> s0_basis = monomials_up_to(n, D / 2);
  std::vector<int> used;  // constraint indices with a multiplier
  std::vector<std::vector<Exponents>> s_basis;
  int mult_deg = 0;
  for (int i = 0; i < static_cast<int>(constraints.size()); ++i) {
    const int dc = constraints[i].max_degree();
    if (dc > D) continue;
    const int ds = (D - dc) / 2;
    used.push_back(i);
    s_basis.push_back(monomials_up_to(n, ds));
    mult_deg = std::max(mult_deg, ds);
  }
  cert.multiplier_degree = mult_deg;
  if (used.empty()) return cert;  // nothing to work with

  // SDP blocks: Q0, then one per used constraint
  SDPProblem sdp;
  sdp.block_sizes.push_back(static_cast<int>(s0_basis.size()));
  for (const auto& sb : s_basis) sdp.block_sizes.push_back(static_cast<int>(sb.size()));
  const int nb = static_cast<int>(sdp.block_sizes.size());

  sdp.C.assign(nb, MatrixXd());
  for (int j = 0; j < nb; ++j) {
    MatrixXd Cj = MatrixXd::Zero(sdp.block_sizes[j], sdp.block_sizes[j]);
    Cj(0, 0) = 1.0;  // basis entry 0 is the constant monomial
    sdp.C[j] = Cj;
  }

  // equality per monomial gamma != 0 with |gamma| <= D
  const auto gammas = monomials_up_to(n, D);
  std::vector<std::vector<MatrixXd>> rows;
  std::vector<double> rhs;

  auto add_pairs = [&](MatrixXd& Akj, const std::vector<Exponents>& basis,
                       const Exponents& gamma, double w) {
    const int m = static_cast<int>(basis.size());
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        bool match = true;
        for (int i = 0; i < n; ++i) {
          if (basis[a][i] + basis[b][i] != gamma[i]) {
            match = false;
            break;
          }
        }
        if (match) Akj(a, b) += w;
      }
    }
  };

  for (const auto& gamma : gammas) {
    if (degree(gamma) == 0) continue;
    std::vector<MatrixXd> row(nb);
    row[0] = MatrixXd::Zero(sdp.block_sizes[0], sdp.block_sizes[0]);
    add_pairs(row[0], s0_basis, gamma, 1.0);
    for (int u = 0; u < static_cast<int>(used.size()); ++u) {
      MatrixXd Ak = MatrixXd::Zero(sdp.block_sizes[1 + u], sdp.block_sizes[1 + u]);
      add_pairs(Ak, s_basis[u], gamma, 1.0);
      for (const auto& t : constraints[used[u]].terms()) {
        Exponents rem(n);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
          rem[i] = gamma[i] - t.exponents[i];
          if (rem[i] < 0) {
            ok = false;
            break;
          }
        }
        if (ok) add_pairs(Ak, s_basis[u], rem, -t.coeff);
      }
      row[1 + u] = std::move(Ak);
    }
    rows.push_back(std::move(row));
    rhs.push_back(-target.coefficient(gamma));
  }
  sdp.A = std::move(rows);
  sdp.b = Eigen::Map<VectorXd>(rhs.data(), rhs.size());

  const SDPResult sol = solve_sdp(sdp);
  cert.solver_converged = sol.converged;
  if (!sol.converged) return cert;

  cert.epsilon_star = sol.objective;
  cert.gram_matrices = sol.X;

  // independent verification: PSD blocks and the polynomial identity
  double min_eig = 0.0;
  for (const auto& Q : sol.X) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  Polynomial identity = gram_to_polynomial(sol.X[0], s0_basis, n);
  Polynomial one(n);
  one.add_term(Exponents(n, 0), 1.0);
  for (int u = 0; u < static_cast<int>(used.size()); ++u) {
    const Polynomial sq = gram_to_polynomial(sol.X[1 + u], s_basis[u], n);
    identity += sq * (one - constraints[used[u]]);
  }
  identity += target;
  Polynomial eps_const(n);
  eps_const.add_term(Exponents(n, 0), cert.epsilon_star);
  cert.identity_residual = identity.coefficient_distance(eps_const);

  if (min_eig < -kPsdTol || cert.identity_residual > kIdentityResidualTol) {
    cert.verdict = SOSVerdict::kInconclusive;
    return cert;
  }
  if (cert.epsilon_star < 1.0 - kMarginalBand)
    cert.verdict = SOSVerdict::kRedundant;
  else
    cert.verdict = SOSVerdict::kInconclusive;
  return cert;
}

RedundancyCertificate sos_redundancy(const std::vector<Polynomial>& polys, int j,
                                     int identity_degree) {
  if (polys.size() < 2)
    throw std::invalid_argument("sos_redundancy: remaining constraint system is empty");
  if (j < 0 || j >= static_cast<int>(polys.size()))
    throw std::invalid_argument("sos_redundancy: bad index");
  std::vector<Polynomial> rest;
  rest.reserve(polys.size() - 1);
  for (int i = 0; i < static_cast<int>(polys.size()); ++i)
    if (i != j) rest.push_back(polys[i]);
  RedundancyCertificate cert = sos_implication(rest, polys[j], identity_degree);
  cert.index = j;
  return cert;
}

MinimalDescription minimal_semialgebraic(const std::vector<Polynomial>& polys,
                                         int max_identity_degree) {
  MinimalDescription out;
  std::vector<int> original(polys.size());
  for (int i = 0; i < static_cast<int>(polys.size()); ++i) original[i] = i;
  out.kept = polys;

  // exact duplicates first (a duplicate can never reach eps* < 1)
  for (int i = 0; i < static_cast<int>(out.kept.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(out.kept.size());) {
      if (out.kept[i].coefficient_distance(out.kept[j]) <= 1e-12) {
        out.removed.push_back(original[j]);
        RedundancyCertificate dup;
        dup.index = original[j];
        dup.verdict = SOSVerdict::kRedundant;
        dup.epsilon_star = 1.0;
        dup.exact_duplicate = true;
        out.certificates.push_back(std::move(dup));
        out.kept.erase(out.kept.begin() + j);
        original.erase(original.begin() + j);
      } else {
        ++j;
      }
    }
  }

  const int d0 = default_identity_degree(out.kept);
  const int dmax = std::max(max_identity_degree, d0);

  bool changed = true;
  while (changed && out.kept.size() >= 2) {
    changed = false;
    for (int j = 0; j < static_cast<int>(out.kept.size()); ++j) {
      RedundancyCertificate cert;
      for (int D = d0; D <= dmax; D += 2) {
        try {
          cert = sos_redundancy(out.kept, j, D);
        } catch (const std::exception&) {
          cert = {};
        }
        if (cert.verdict == SOSVerdict::kRedundant) break;
      }
      if (cert.verdict == SOSVerdict::kRedundant) {
        cert.index = original[j];
        out.removed.push_back(original[j]);
        out.certificates.push_back(std::move(cert));
        out.kept.erase(out.kept.begin() + j);
        original.erase(original.begin() + j);
        changed = true;
        break;  // rescan from the start
      }
    }
  }
  return out;
}

}  // namespace mais
