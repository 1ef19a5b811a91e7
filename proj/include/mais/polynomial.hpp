#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mais {

/// Exponent tuple of a monomial, one entry per state variable.
using Exponents = std::vector<int>;

/// Coefficients smaller than this are pruned from polynomials.
inline constexpr double kCoeffTol = 1e-12;

int degree(const Exponents& alpha);

/// Multinomial coefficient d! / (a1! ... an!) with d = sum(alpha).
std::int64_t multinomial(const Exponents& alpha);

struct Term {
  Exponents exponents;
  double coeff;
};

/// Sparse multivariate polynomial. Terms are kept in a canonical order
/// (degree, then lexicographic exponents) with no duplicates and no zero
/// coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {}
  Polynomial(int n, std::vector<Term> terms);

  int dimension() const { return n_; }
  int max_degree() const;
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  double coefficient(const Exponents& alpha) const;
  double constant_term() const;

  void add_term(const Exponents& alpha, double coeff);

  double eval(const Eigen::VectorXd& x) const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  Polynomial operator*(const Polynomial& other) const;

  /// Set of degrees of the monomials present (ignores the constant term).
  std::vector<int> monomial_degrees() const;

  /// max |coefficient difference| against another polynomial.
  double coefficient_distance(const Polynomial& other) const;

  std::string to_string() const;

 private:
  void prune();

  int n_ = 0;
  std::vector<Term> terms_;
};

/// Monomial evaluation x^alpha.
double eval_monomial(const Exponents& alpha, const Eigen::VectorXd& x);

/// Canonical term comparison: by degree, then ascending lexicographic.
bool term_order_less(const Exponents& a, const Exponents& b);

}  // namespace mais
