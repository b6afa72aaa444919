#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "diffgal/rational.hpp"

namespace diffgal {

// Global symbol order: "t", then plain identifiers lexicographically, then
// indexed names such as x12 or g3 by (prefix, digit count, digits).
bool symbol_less(const std::string& a, const std::string& b);

using Exponents = std::vector<unsigned>;

// Graded lexicographic order, greatest first; position 0 is the highest variable.
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class Polynomial {
 public:
  using Terms = std::map<Exponents, Rational, GrlexGreater>;

  Polynomial() = default;
  Polynomial(const Rational& c);  // NOLINT: implicit constant embedding
  Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT
  static Polynomial var(const std::string& name, unsigned power = 1);
  // vars must be sorted by symbol_less and duplicate-free.
  static Polynomial from_terms(std::vector<std::string> vars, Terms terms);

  const std::vector<std::string>& vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return vars_.empty(); }
  Rational constant_value() const;  // requires is_constant()
  bool has_var(const std::string& v) const;
  std::size_t num_terms() const { return terms_.size(); }

  unsigned total_degree() const;
  unsigned degree_in(const std::string& v) const;
  // Leading coefficient and exponents in grlex order.
  const Rational& leading_coeff() const;
  const Exponents& leading_exponents() const;

  // Coefficients with respect to v, keyed by the power of v.
  std::map<unsigned, Polynomial> coeffs_in(const std::string& v) const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  Polynomial& operator-=(const Polynomial& b) { return *this = *this - b; }
  Polynomial& operator*=(const Polynomial& b) { return *this = *this * b; }
  Polynomial scaled(const Rational& c) const;
  Polynomial pow(unsigned e) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }
  // Total order used only for deterministic sorting.
  friend bool operator<(const Polynomial& a, const Polynomial& b);

  // Substitute polynomials for variables; unlisted variables stay.
  Polynomial substitute(const std::map<std::string, Polynomial>& s) const;
  Rational evaluate(const std::map<std::string, Rational>& point) const;

  // Integer-coefficient, content-free, positive leading coefficient.
  Polynomial primitive() const;
  // lcm of coefficient denominators and gcd of the resulting numerators.
  Integer coeff_denominator_lcm() const;
  Integer coeff_numerator_gcd() const;

  std::string str() const;

 private:
  std::vector<std::string> vars_;
  Terms terms_;
  void trim();
  Polynomial widened(const std::vector<std::string>& vars) const;
  friend std::vector<std::string> merge_vars(const Polynomial&, const Polynomial&);
  friend bool try_exact_div(const Polynomial&, const Polynomial&, Polynomial&);
};

std::vector<std::string> merge_vars(const Polynomial& a, const Polynomial& b);

// Exact division; throws DomainError when b does not divide a.
Polynomial exact_div(const Polynomial& a, const Polynomial& b);
// Attempts exact division, returning false if b does not divide a.
bool try_exact_div(const Polynomial& a, const Polynomial& b, Polynomial& q);
// Normalized gcd over Q: integer-primitive with positive leading coefficient.
Polynomial gcd(const Polynomial& a, const Polynomial& b);
// Derivative with respect to v.
Polynomial derivative(const Polynomial& p, const std::string& v);

// Univariate helpers for polynomials in a single variable v.
std::vector<Rational> dense_coeffs(const Polynomial& p, const std::string& v);  // index = power
Polynomial from_dense(const std::vector<Rational>& c, const std::string& v);
// Distinct rational roots, ascending.
std::vector<Rational> rational_roots(const Polynomial& p, const std::string& v);

}  // namespace diffgal
