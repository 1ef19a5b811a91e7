#include "mais/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mais {

int degree(const Exponents& alpha) {
  int d = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("negative exponent");
    d += a;
  }
  return d;
}

std::int64_t multinomial(const Exponents& alpha) {
  const int d = degree(alpha);
  if (d > 20) throw std::overflow_error("multinomial: degree too large");
  std::int64_t r = 1;
  int used = 0;
  // product of binomials C(used + a, a) equals d!/(a1!...an!)
  for (int a : alpha) {
    for (int i = 1; i <= a; ++i) {
      r = r * (used + i) / i;
    }
    used += a;
  }
  return r;
}

double eval_monomial(const Exponents& alpha, const Eigen::VectorXd& x) {
  double v = 1.0;
  for (int i = 0; i < static_cast<int>(alpha.size()); ++i) {
    for (int k = 0; k < alpha[i]; ++k) v *= x[i];
  }
  return v;
}

bool term_order_less(const Exponents& a, const Exponents& b) {
  const int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return a < b;
}

Polynomial::Polynomial(int n, std::vector<Term> terms) : n_(n) {
  for (const auto& t : terms) {
    if (static_cast<int>(t.exponents.size()) != n_)
      throw std::invalid_argument("term dimension mismatch");
    add_term(t.exponents, t.coeff);
  }
}

int Polynomial::max_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, degree(t.exponents));
  return d;
}

double Polynomial::coefficient(const Exponents& alpha) const {
  for (const auto& t : terms_)
    if (t.exponents == alpha) return t.coeff;
  return 0.0;
}

double Polynomial::constant_term() const {
  return coefficient(Exponents(n_, 0));
}

void Polynomial::add_term(const Exponents& alpha, double coeff) {
  if (static_cast<int>(alpha.size()) != n_)
    throw std::invalid_argument("term dimension mismatch");
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), alpha,
      [](const Term& t, const Exponents& a) { return term_order_less(t.exponents, a); });
  if (it != terms_.end() && it->exponents == alpha) {
    it->coeff += coeff;
    if (std::abs(it->coeff) <= kCoeffTol) terms_.erase(it);
  } else if (std::abs(coeff) > kCoeffTol) {
    terms_.insert(it, Term{alpha, coeff});
  }
}

double Polynomial::eval(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw std::invalid_argument("eval dimension mismatch");
  double v = 0.0;
  for (const auto& t : terms_) v += t.coeff * eval_monomial(t.exponents, x);
  return v;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (n_ != other.n_) throw std::invalid_argument("dimension mismatch");
  for (const auto& t : other.terms_) add_term(t.exponents, t.coeff);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (n_ != other.n_) throw std::invalid_argument("dimension mismatch");
  for (const auto& t : other.terms_) add_term(t.exponents, -t.coeff);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& t : terms_) t.coeff *= s;
  prune();
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (n_ != other.n_) throw std::invalid_argument("dimension mismatch");
  std::map<Exponents, double> acc;
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      Exponents e(n_);
      for (int i = 0; i < n_; ++i) e[i] = a.exponents[i] + b.exponents[i];
      acc[e] += a.coeff * b.coeff;
    }
  }
  Polynomial r(n_);
  for (const auto& [e, c] : acc) r.add_term(e, c);
  return r;
}

std::vector<int> Polynomial::monomial_degrees() const {
  std::vector<int> out;
  for (const auto& t : terms_) {
    const int d = degree(t.exponents);
    if (d == 0) continue;
    if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double Polynomial::coefficient_distance(const Polynomial& other) const {
  double m = 0.0;
  for (const auto& t : terms_)
    m = std::max(m, std::abs(t.coeff - other.coefficient(t.exponents)));
  for (const auto& t : other.terms_)
    m = std::max(m, std::abs(t.coeff - coefficient(t.exponents)));
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << (t.coeff >= 0 ? " + " : " - ");
    else if (t.coeff < 0) os << "-";
    os << std::abs(t.coeff);
    for (int i = 0; i < n_; ++i) {
      if (t.exponents[i] == 0) continue;
      os << "*x" << (i + 1);
      if (t.exponents[i] > 1) os << "^" << t.exponents[i];
    }
    first = false;
  }
  return os.str();
}

void Polynomial::prune() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const Term& t) { return std::abs(t.coeff) <= kCoeffTol; }),
               terms_.end());
}

}  // namespace mais
