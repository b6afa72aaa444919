#pragma once

#include <map>
#include <string>

#include "diffgal/polynomial.hpp"

namespace diffgal {

// Quotient of polynomials kept in normal form: coprime, integer coefficients
// with no common content, denominator with positive leading coefficient.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(const Rational& c) : num_(c), den_(1) { normalize_constant(); }  // NOLINT
  RationalFunction(long c) : RationalFunction(Rational(c)) {}  // NOLINT
  RationalFunction(const Polynomial& p) : num_(p), den_(1) { normalize_constant(); }  // NOLINT
  // Throws DomainError on a zero denominator.
  RationalFunction(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;
  std::vector<std::string> vars() const { return merge_vars(num_, den_); }
  // The numerator divided by the (constant) denominator; throws otherwise.
  Polynomial as_polynomial() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  RationalFunction& operator/=(const RationalFunction& b) { return *this = *this / b; }
  RationalFunction inverse() const;
  RationalFunction pow(long e) const;

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RationalFunction substitute(const std::map<std::string, RationalFunction>& s) const;
  Rational evaluate(const std::map<std::string, Rational>& point) const;

  std::string str() const;

 private:
  Polynomial num_, den_;
  void normalize_constant();
  void normalize();
};

inline bool is_zero(const RationalFunction& f) { return f.is_zero(); }
inline std::size_t pivot_weight(const RationalFunction& f) { return f.num().num_terms() + f.den().num_terms(); }

// Normal form of num/den.
RationalFunction rf_normalize(const Polynomial& num, const Polynomial& den);

}  // namespace diffgal
