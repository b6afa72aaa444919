#include "diffgal/rational_function.hpp"

#include "diffgal/errors.hpp"

namespace diffgal {

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den)
    : num_(num), den_(den) {
  if (den_.is_zero()) throw DomainError("zero denominator");
  normalize();
}

RationalFunction rf_normalize(const Polynomial& num, const Polynomial& den) {
  return RationalFunction(num, den);
}

void RationalFunction::normalize_constant() { normalize(); }

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(1);
    return;
  }
  if (!den_.is_constant() && !num_.is_constant()) {
    Polynomial g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact_div(num_, g);
      den_ = exact_div(den_, g);
    }
  }
  Integer L = lcm(num_.coeff_denominator_lcm(), den_.coeff_denominator_lcm());
  num_ = num_.scaled(Rational(L));
  den_ = den_.scaled(Rational(L));
  Integer G = gcd(num_.coeff_numerator_gcd(), den_.coeff_numerator_gcd());
  if (sgn(den_.leading_coeff()) < 0) G = -G;
  if (G != 1) {
    Rational s(Integer(1), G);
    s.canonicalize();
    num_ = num_.scaled(s);
    den_ = den_.scaled(s);
  }
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw DomainError("not a constant: " + str());
  return num_.constant_value() / den_.constant_value();
}

Polynomial RationalFunction::as_polynomial() const {
  if (!den_.is_constant()) throw DomainError("not a polynomial: " + str());
  return num_.scaled(1 / den_.constant_value());
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return RationalFunction();
  // Cross-cancel first so the products stay small.
  Polynomial g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
  return RationalFunction(exact_div(a.num_, g1) * exact_div(b.num_, g2),
                          exact_div(a.den_, g2) * exact_div(b.den_, g1));
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DomainError("inverse of zero");
  return RationalFunction(den_, num_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  return a * b.inverse();
}

RationalFunction RationalFunction::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  RationalFunction r;
  r.num_ = num_.pow(static_cast<unsigned>(e));
  r.den_ = den_.pow(static_cast<unsigned>(e));
  if (r.num_.is_zero()) r.den_ = Polynomial(1);
  return r;
}

RationalFunction RationalFunction::substitute(
    const std::map<std::string, RationalFunction>& s) const {
  // Evaluate each polynomial by Horner-free term expansion over the field.
  auto eval = [&](const Polynomial& p) {
    std::map<std::string, std::map<unsigned, RationalFunction>> cache;
    RationalFunction acc;
    const auto& vars = p.vars();
    for (const auto& [e, c] : p.terms()) {
      RationalFunction term(c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        auto it = s.find(vars[i]);
        if (it == s.end()) {
          term *= RationalFunction(Polynomial::var(vars[i], e[i]));
          continue;
        }
        auto& slot = cache[vars[i]];
        auto hit = slot.find(e[i]);
        if (hit == slot.end()) hit = slot.emplace(e[i], it->second.pow(e[i])).first;
        term *= hit->second;
      }
      acc += term;
    }
    return acc;
  };
  bool touched = false;
  for (const auto& v : vars())
    if (s.count(v)) touched = true;
  if (!touched) return *this;
  return eval(num_) / eval(den_);
}

Rational RationalFunction::evaluate(const std::map<std::string, Rational>& point) const {
  Rational d = den_.evaluate(point);
  if (diffgal::is_zero(d)) throw DomainError("evaluation at a pole of " + str());
  return num_.evaluate(point) / d;
}

std::string RationalFunction::str() const {
  if (den_ == Polynomial(1)) return num_.str();
  std::string n = num_.num_terms() > 1 ? "(" + num_.str() + ")" : num_.str();
  bool bare = false;
  if (den_.is_constant()) {
    bare = true;
  } else if (den_.num_terms() == 1 && den_.vars().size() == 1 && den_.leading_coeff() == 1) {
    bare = true;
  }
  return n + "/" + (bare ? den_.str() : "(" + den_.str() + ")");
}

}  // namespace diffgal
