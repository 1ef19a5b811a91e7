#include "mais/lift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mais {
namespace {

std::string pack_key(int degree, const Exponents& alpha) {
  std::ostringstream os;
  os << degree;
  for (int a : alpha) os << ',' << a;
  return os.str();
}

void enumerate_tuples(int n, int d, int pos, int remaining, Exponents& cur,
                      std::vector<Exponents>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int a = 0; a <= remaining; ++a) {
    cur[pos] = a;
    enumerate_tuples(n, d, pos + 1, remaining - a, cur, out);
  }
}

}  // namespace

std::vector<Exponents> exponent_tuples(int n, int d) {
  std::vector<Exponents> out;
  Exponents cur(n, 0);
  enumerate_tuples(n, d, 0, d, cur, out);
  return out;
}

LiftBasis::LiftBasis(int n, std::vector<int> degrees) : n_(n), degrees_(std::move(degrees)) {
  if (n_ < 1) throw std::invalid_argument("LiftBasis: dimension must be >= 1");
  std::sort(degrees_.begin(), degrees_.end());
  degrees_.erase(std::unique(degrees_.begin(), degrees_.end()), degrees_.end());
  if (degrees_.empty() || degrees_.front() < 1)
    throw std::invalid_argument("LiftBasis: degrees must be >= 1");
  for (int l : degrees_) {
    if (l == 1) {
      // identity embedding: coordinate i carries x_i
      for (int i = 0; i < n_; ++i) {
        Exponents e(n_, 0);
        e[i] = 1;
        coords_.emplace_back(1, e);
      }
    } else {
      for (auto& a : exponent_tuples(n_, l)) coords_.emplace_back(l, a);
    }
  }
  sqm_.reserve(coords_.size());
  for (int i = 0; i < static_cast<int>(coords_.size()); ++i) {
    sqm_.push_back(std::sqrt(static_cast<double>(multinomial(coords_[i].second))));
    lookup_[pack_key(coords_[i].first, coords_[i].second)] = i;
  }
}

int LiftBasis::index_of(int degree, const Exponents& alpha) const {
  auto it = lookup_.find(pack_key(degree, alpha));
  if (it == lookup_.end()) throw std::invalid_argument("LiftBasis: coordinate not in basis");
  return it->second;
}

bool LiftBasis::has_degree(int degree) const {
  return std::find(degrees_.begin(), degrees_.end(), degree) != degrees_.end();
}

std::pair<int, int> LiftBasis::block_of(int degree) const {
  int start = 0;
  for (int l : degrees_) {
    int size = 0;
    for (const auto& c : coords_)
      if (c.first == l) ++size;
    if (l == degree) return {start, size};
    start += size;
  }
  throw std::invalid_argument("LiftBasis: degree not in basis");
}

Eigen::VectorXd lift_vector(const Eigen::VectorXd& x, const LiftBasis& basis) {
  if (x.size() != basis.state_dimension())
    throw std::invalid_argument("lift_vector: dimension mismatch");
  Eigen::VectorXd y(basis.size());
  for (int i = 0; i < basis.size(); ++i)
    y[i] = basis.sqrt_multinomial_at(i) * eval_monomial(basis.exponents_at(i), x);
  return y;
}

double permanent(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("permanent: matrix not square");
  const int k = static_cast<int>(M.rows());
  if (k == 0) return 1.0;
  if (k > 20) throw std::invalid_argument("permanent: matrix too large");
  // Ryser: perm(A) = (-1)^k sum_{S != empty} (-1)^|S| prod_i sum_{j in S} a_ij
  double total = 0.0;
  const unsigned full = 1u << k;
  for (unsigned mask = 1; mask < full; ++mask) {
    Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(k);
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) rowsum += M.col(j);
    const double prod = rowsum.prod();
    const int bits = __builtin_popcount(mask);
    total += ((k - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

Eigen::MatrixXd lift_matrix(const Eigen::MatrixXd& A, const LiftBasis& basis) {
  const int n = basis.state_dimension();
  if (A.rows() != n || A.cols() != n)
    throw std::invalid_argument("lift_matrix: dimension mismatch");
  const int N = basis.size();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
  // linear substitution rows as degree-1 polynomials
  std::vector<Polynomial> rows(n, Polynomial(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (A(i, j) == 0.0) continue;
      Exponents e(n, 0);
      e[j] = 1;
      rows[i].add_term(e, A(i, j));
    }
  }
  for (int r = 0; r < N; ++r) {
    const int l = basis.degree_at(r);
    const Exponents& alpha = basis.exponents_at(r);
    // sqrt(alpha!) * prod_i (A_i . x)^{alpha_i}
    Polynomial p(n);
    p.add_term(Exponents(n, 0), basis.sqrt_multinomial_at(r));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < alpha[i]; ++k) p = p * rows[i];
    for (const auto& t : p.terms()) {
      const int c = basis.index_of(l, t.exponents);
      L(r, c) = t.coeff / basis.sqrt_multinomial_at(c);
    }
  }
  return L;
}

double lift_matrix_entry_permanent(const Eigen::MatrixXd& A, const Exponents& alpha,
                                   const Exponents& beta) {
  const int d = degree(alpha);
  if (degree(beta) != d) throw std::invalid_argument("permanent entry: degree mismatch");
  // rows of A repeated alpha_i times, columns repeated beta_j times
  std::vector<int> ri, ci;
  for (int i = 0; i < static_cast<int>(alpha.size()); ++i)
    for (int k = 0; k < alpha[i]; ++k) ri.push_back(i);
  for (int j = 0; j < static_cast<int>(beta.size()); ++j)
    for (int k = 0; k < beta[j]; ++k) ci.push_back(j);
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = A(ri[i], ci[j]);
  auto mu = [](const Exponents& e) {
    double r = 1.0;
    for (int a : e)
      for (int k = 2; k <= a; ++k) r *= k;
    return r;
  };
  return permanent(M) / std::sqrt(mu(alpha) * mu(beta));
}

LiftedMatrixSet lift_matrix_set(const std::vector<Eigen::MatrixXd>& mats,
                                const LiftBasis& basis) {
  LiftedMatrixSet out;
  out.original = mats;
  out.lifted.reserve(mats.size());
  for (const auto& A : mats) out.lifted.push_back(lift_matrix(A, basis));
  return out;
}

ConstraintDecomposition decompose_constraints(const std::vector<Polynomial>& polys) {
  if (polys.empty()) throw std::invalid_argument("decompose_constraints: empty list");
  std::vector<int> degrees;
  const int n = polys.front().dimension();
  for (const auto& p : polys) {
    if (p.dimension() != n)
      throw std::invalid_argument("decompose_constraints: mixed dimensions");
    if (p.is_zero() || p.max_degree() < 1)
      throw std::invalid_argument("decompose_constraints: constraint of degree 0");
    if (std::abs(p.constant_term()) > kCoeffTol)
      throw std::invalid_argument("decompose_constraints: nonzero constant term");
    for (int d : p.monomial_degrees())
      if (std::find(degrees.begin(), degrees.end(), d) == degrees.end())
        degrees.push_back(d);
  }
  LiftBasis basis(n, degrees);
  std::vector<Eigen::VectorXd> g;
  g.reserve(polys.size());
  for (const auto& p : polys) {
    Eigen::VectorXd gi = Eigen::VectorXd::Zero(basis.size());
    for (const auto& t : p.terms()) {
      const int idx = basis.index_of(degree(t.exponents), t.exponents);
      gi[idx] = t.coeff / basis.sqrt_multinomial_at(idx);
    }
    g.push_back(std::move(gi));
  }
  return {std::move(basis), std::move(g)};
}

Polynomial lower_row(const Eigen::VectorXd& f, const LiftBasis& basis) {
  if (f.size() != basis.size()) throw std::invalid_argument("lower_row: dimension mismatch");
  Polynomial p(basis.state_dimension());
  for (int i = 0; i < basis.size(); ++i) {
    if (f[i] == 0.0) continue;
    p.add_term(basis.exponents_at(i), f[i] * basis.sqrt_multinomial_at(i));
  }
  return p;
}

std::vector<Polynomial> lower_polyhedron(const HPolyhedron& P, const LiftBasis& basis) {
  if (P.dim() != basis.size())
    throw std::invalid_argument("lower_polyhedron: dimension mismatch");
  std::vector<Polynomial> out;
  out.reserve(P.rows());
  for (int i = 0; i < P.rows(); ++i) {
    const double bi = P.b()[i];
    if (bi <= 0.0)
      throw std::invalid_argument("lower_polyhedron: row has nonpositive RHS");
    out.push_back(lower_row(P.A().row(i).transpose() / bi, basis));
  }
  return out;
}

}  // namespace mais
