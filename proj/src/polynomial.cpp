#include "diffgal/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include "diffgal/errors.hpp"

namespace diffgal {

namespace {

struct SymbolKey {
  int rank;
  std::string prefix;
  std::size_t ndigits;
  std::string digits;
};

SymbolKey symbol_key(const std::string& s) {
  if (s == "t") return {0, s, 0, ""};
  std::size_t i = s.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
  bool indexed = i > 0 && i < s.size();
  for (std::size_t j = 0; indexed && j < i; ++j)
    if (!std::isalpha(static_cast<unsigned char>(s[j])) && s[j] != '_') indexed = false;
  if (!indexed) return {1, s, 0, ""};
  return {2, s.substr(0, i), s.size() - i, s.substr(i)};
}

unsigned degree_of(const Exponents& e) {
  unsigned d = 0;
  for (unsigned x : e) d += x;
  return d;
}

// Index of each element of `from` within `to`; both sorted by symbol_less.
std::vector<std::size_t> embedding(const std::vector<std::string>& from,
                                   const std::vector<std::string>& to) {
  std::vector<std::size_t> idx;
  idx.reserve(from.size());
  std::size_t j = 0;
  for (const auto& v : from) {
    while (to[j] != v) ++j;
    idx.push_back(j);
  }
  return idx;
}

void add_into(Polynomial::Terms& acc, const Exponents& e, const Rational& c) {
  auto [it, inserted] = acc.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (is_zero(it->second)) acc.erase(it);
  }
}

}  // namespace

bool symbol_less(const std::string& a, const std::string& b) {
  if (a == b) return false;
  SymbolKey ka = symbol_key(a), kb = symbol_key(b);
  if (ka.rank != kb.rank) return ka.rank < kb.rank;
  if (ka.prefix != kb.prefix) return ka.prefix < kb.prefix;
  if (ka.ndigits != kb.ndigits) return ka.ndigits < kb.ndigits;
  return ka.digits < kb.digits;
}

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
  unsigned da = degree_of(a), db = degree_of(b);
  if (da != db) return da > db;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] > b[i];
  return false;
}

Polynomial::Polynomial(const Rational& c) {
  if (!diffgal::is_zero(c)) terms_.emplace(Exponents{}, c);
}

Polynomial Polynomial::var(const std::string& name, unsigned power) {
  if (name.empty()) throw DomainError("empty variable name");
  Polynomial p;
  if (power == 0) return Polynomial(1);
  p.vars_ = {name};
  p.terms_.emplace(Exponents{power}, Rational(1));
  return p;
}

Polynomial Polynomial::from_terms(std::vector<std::string> vars, Terms terms) {
  Polynomial p;
  p.vars_ = std::move(vars);
  for (auto it = terms.begin(); it != terms.end();) {
    if (diffgal::is_zero(it->second))
      it = terms.erase(it);
    else
      ++it;
  }
  p.terms_ = std::move(terms);
  p.trim();
  return p;
}

Rational Polynomial::constant_value() const {
  if (!vars_.empty()) throw DomainError("polynomial is not constant: " + str());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

bool Polynomial::has_var(const std::string& v) const {
  return std::find(vars_.begin(), vars_.end(), v) != vars_.end();
}

unsigned Polynomial::total_degree() const {
  return terms_.empty() ? 0 : degree_of(terms_.begin()->first);
}

unsigned Polynomial::degree_in(const std::string& v) const {
  auto it = std::find(vars_.begin(), vars_.end(), v);
  if (it == vars_.end()) return 0;
  std::size_t i = static_cast<std::size_t>(it - vars_.begin());
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
  return d;
}

const Rational& Polynomial::leading_coeff() const {
  if (terms_.empty()) throw DomainError("leading coefficient of zero");
  return terms_.begin()->second;
}

const Exponents& Polynomial::leading_exponents() const {
  if (terms_.empty()) throw DomainError("leading term of zero");
  return terms_.begin()->first;
}

void Polynomial::trim() {
  if (terms_.empty()) {
    vars_.clear();
    return;
  }
  std::vector<bool> used(vars_.size(), false);
  for (const auto& [e, c] : terms_)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) used[i] = true;
  if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return;
  std::vector<std::string> nv;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (used[i]) nv.push_back(vars_[i]);
  Terms nt;
  for (const auto& [e, c] : terms_) {
    Exponents ne;
    ne.reserve(nv.size());
    for (std::size_t i = 0; i < e.size(); ++i)
      if (used[i]) ne.push_back(e[i]);
    nt.emplace_hint(nt.end(), std::move(ne), c);
  }
  vars_ = std::move(nv);
  terms_ = std::move(nt);
}

Polynomial Polynomial::widened(const std::vector<std::string>& vars) const {
  if (vars == vars_) return *this;
  auto idx = embedding(vars_, vars);
  Polynomial p;
  p.vars_ = vars;
  for (const auto& [e, c] : terms_) {
    Exponents ne(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) ne[idx[i]] = e[i];
    p.terms_.emplace_hint(p.terms_.end(), std::move(ne), c);
  }
  return p;
}

std::vector<std::string> merge_vars(const Polynomial& a, const Polynomial& b) {
  std::vector<std::string> out;
  std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                 std::back_inserter(out), symbol_less);
  return out;
}

std::map<unsigned, Polynomial> Polynomial::coeffs_in(const std::string& v) const {
  std::map<unsigned, Polynomial> out;
  auto it = std::find(vars_.begin(), vars_.end(), v);
  if (it == vars_.end()) {
    if (!is_zero()) out.emplace(0u, *this);
    return out;
  }
  std::size_t k = static_cast<std::size_t>(it - vars_.begin());
  std::vector<std::string> rest = vars_;
  rest.erase(rest.begin() + static_cast<long>(k));
  std::map<unsigned, Terms> parts;
  for (const auto& [e, c] : terms_) {
    Exponents ne = e;
    ne.erase(ne.begin() + static_cast<long>(k));
    parts[e[k]].emplace(std::move(ne), c);
  }
  for (auto& [pw, t] : parts) out.emplace(pw, from_terms(rest, std::move(t)));
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& [e, c] : p.terms_) c = -c;
  return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  auto vars = merge_vars(a, b);
  Polynomial r = a.widened(vars);
  Polynomial wb = b.widened(vars);
  for (const auto& [e, c] : wb.terms_) add_into(r.terms_, e, c);
  r.trim();
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  if (b.is_constant()) return a.scaled(b.constant_value());
  if (a.is_constant()) return b.scaled(a.constant_value());
  auto vars = merge_vars(a, b);
  Polynomial wa = a.widened(vars), wb = b.widened(vars);
  Polynomial r;
  r.vars_ = vars;
  Exponents e(vars.size());
  for (const auto& [ea, ca] : wa.terms_)
    for (const auto& [eb, cb] : wb.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add_into(r.terms_, e, ca * cb);
    }
  r.trim();
  return r;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  if (diffgal::is_zero(c)) return Polynomial();
  Polynomial p = *this;
  for (auto& [e, v] : p.terms_) v *= c;
  return p;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1), base = *this;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  return a.str() < b.str();
}

Polynomial Polynomial::substitute(const std::map<std::string, Polynomial>& s) const {
  std::vector<const Polynomial*> images(vars_.size(), nullptr);
  std::vector<Polynomial> plain(vars_.size());
  bool touched = false;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = s.find(vars_[i]);
    if (it != s.end()) {
      images[i] = &it->second;
      touched = true;
    } else {
      plain[i] = var(vars_[i]);
      images[i] = &plain[i];
    }
  }
  if (!touched) return *this;
  std::vector<std::map<unsigned, Polynomial>> cache(vars_.size());
  auto power = [&](std::size_t i, unsigned e) -> const Polynomial& {
    auto it = cache[i].find(e);
    if (it != cache[i].end()) return it->second;
    return cache[i].emplace(e, images[i]->pow(e)).first->second;
  };
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Polynomial term(c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= power(i, e[i]);
    out += term;
  }
  return out;
}

Rational Polynomial::evaluate(const std::map<std::string, Rational>& point) const {
  std::vector<Rational> vals;
  for (const auto& v : vars_) {
    auto it = point.find(v);
    if (it == point.end()) throw DomainError("no value for variable " + v);
    vals.push_back(it->second);
  }
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= diffgal::pow(vals[i], static_cast<long>(e[i]));
    sum += term;
  }
  return sum;
}

Integer Polynomial::coeff_denominator_lcm() const {
  Integer l = 1;
  for (const auto& [e, c] : terms_) l = lcm(l, c.get_den());
  return l;
}

Integer Polynomial::coeff_numerator_gcd() const {
  Integer g = 0;
  for (const auto& [e, c] : terms_) g = gcd(g, c.get_num());
  return g;
}

Polynomial Polynomial::primitive() const {
  if (is_zero()) return *this;
  Polynomial p = scaled(Rational(coeff_denominator_lcm()));
  Integer g = p.coeff_numerator_gcd();
  if (sgn(p.leading_coeff()) < 0) g = -g;
  Rational s(Integer(1), g);
  s.canonicalize();
  return p.scaled(s);
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    Rational a = abs(c);
    if (first)
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    first = false;
    if (mono.empty())
      out += a.get_str();
    else if (a == 1)
      out += mono;
    else
      out += a.get_str() + "*" + mono;
  }
  return out;
}

bool try_exact_div(const Polynomial& a, const Polynomial& b, Polynomial& q) {
  if (b.is_zero()) throw DomainError("division by zero polynomial");
  if (b.is_constant()) {
    q = a.scaled(1 / b.constant_value());
    return true;
  }
  if (a.is_zero()) {
    q = Polynomial();
    return true;
  }
  auto vars = merge_vars(a, b);
  Polynomial::Terms r = a.widened(vars).terms();
  const Polynomial::Terms bt = b.widened(vars).terms();
  const Exponents& lb = bt.begin()->first;
  const Rational& lc = bt.begin()->second;
  Polynomial::Terms qt;
  Exponents m(vars.size()), e(vars.size());
  while (!r.empty()) {
    const Exponents& lr = r.begin()->first;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (lr[i] < lb[i]) return false;
      m[i] = lr[i] - lb[i];
    }
    Rational c = r.begin()->second / lc;
    qt.emplace(m, c);
    for (const auto& [eb, cb] : bt) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = eb[i] + m[i];
      add_into(r, e, -c * cb);
    }
  }
  q = Polynomial::from_terms(vars, std::move(qt));
  return true;
}

Polynomial exact_div(const Polynomial& a, const Polynomial& b) {
  Polynomial q;
  if (!try_exact_div(a, b, q))
    throw DomainError("inexact division of " + a.str() + " by " + b.str());
  return q;
}

Polynomial derivative(const Polynomial& p, const std::string& v) {
  Polynomial out;
  for (const auto& [pw, c] : p.coeffs_in(v))
    if (pw > 0) out += c * Polynomial::var(v, pw - 1).scaled(Rational(pw));
  return out;
}

namespace {

Polynomial content_in(const Polynomial& p, const std::string& v);

Polynomial prem(Polynomial a, const Polynomial& b, const std::string& v) {
  unsigned db = b.degree_in(v);
  Polynomial lb = b.coeffs_in(v).rbegin()->second;
  while (!a.is_zero() && a.degree_in(v) >= db) {
    auto ca = a.coeffs_in(v);
    unsigned da = ca.rbegin()->first;
    a = lb * a - ca.rbegin()->second * Polynomial::var(v, da - db) * b;
  }
  return a;
}

// Removes the content in v and the rational content, keeping PRS coefficients small.
Polynomial primitive_in(const Polynomial& p, const std::string& v) {
  return exact_div(p, content_in(p, v)).primitive();
}

Polynomial gcd_rec(Polynomial a, Polynomial b) {
  if (a.is_zero()) return b.primitive();
  if (b.is_zero()) return a.primitive();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  for (const auto& v : std::vector<std::string>(a.vars()))
    if (!b.has_var(v)) a = content_in(a, v);
  for (const auto& v : std::vector<std::string>(b.vars()))
    if (!a.has_var(v)) b = content_in(b, v);
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a.vars() != b.vars()) return gcd_rec(a, b);
  const std::string v = a.vars().back();
  Polynomial ca = content_in(a, v), cb = content_in(b, v);
  Polynomial gc = gcd_rec(ca, cb);
  Polynomial r0 = exact_div(a, ca), r1 = exact_div(b, cb);
  if (r0.degree_in(v) < r1.degree_in(v)) std::swap(r0, r1);
  Polynomial g;
  for (;;) {
    Polynomial r = prem(r0, r1, v).primitive();
    if (r.is_zero()) {
      g = r1;
      break;
    }
    if (r.degree_in(v) == 0) {
      g = Polynomial(1);
      break;
    }
    r0 = std::move(r1);
    r1 = primitive_in(r, v);
  }
  return (gc * primitive_in(g, v)).primitive();
}

Polynomial content_in(const Polynomial& p, const std::string& v) {
  if (!p.has_var(v)) return p.primitive();
  Polynomial g;
  for (const auto& [pw, c] : p.coeffs_in(v)) {
    g = gcd_rec(g, c);
    if (g.is_constant()) return Polynomial(1);
  }
  return g;
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) { return gcd_rec(a, b); }

std::vector<Rational> dense_coeffs(const Polynomial& p, const std::string& v) {
  for (const auto& w : p.vars())
    if (w != v) throw DomainError("expected a polynomial in " + v + " only: " + p.str());
  std::vector<Rational> c(p.degree_in(v) + 1, Rational(0));
  for (const auto& [pw, q] : p.coeffs_in(v)) c[pw] = q.constant_value();
  return c;
}

Polynomial from_dense(const std::vector<Rational>& c, const std::string& v) {
  Polynomial p;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!is_zero(c[i])) p += Polynomial::var(v, static_cast<unsigned>(i)).scaled(c[i]);
  return p;
}

namespace {

Integer horner(const std::vector<Integer>& c, const Integer& x) {
  Integer acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

Integer mod_pos(const Integer& a, const Integer& m) { return floor_mod(a, m); }

}  // namespace

std::vector<Rational> rational_roots(const Polynomial& p, const std::string& v) {
  if (p.is_zero()) throw DomainError("roots of the zero polynomial");
  std::vector<Rational> roots;
  auto c = dense_coeffs(p, v);
  if (c.size() <= 1) return roots;
  std::size_t shift = 0;
  while (is_zero(c[shift])) ++shift;
  if (shift > 0) roots.push_back(0);
  c.erase(c.begin(), c.begin() + static_cast<long>(shift));
  Polynomial q = from_dense(c, v);
  q = exact_div(q, gcd(q, derivative(q, v))).primitive();
  auto qc = dense_coeffs(q, v);
  std::size_t n = qc.size() - 1;
  if (n == 0) return roots;
  // Monic integer transform T(m) = a_n^(n-1) S(m / a_n).
  Integer an = qc[n].get_num();
  std::vector<Integer> T(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    Integer f;
    mpz_pow_ui(f.get_mpz_t(), an.get_mpz_t(), static_cast<unsigned long>(n - 1 - i));
    T[i] = qc[i].get_num() * f;
  }
  T[n] = 1;
  std::vector<Integer> dT(n);
  for (std::size_t i = 1; i <= n; ++i) dT[i - 1] = T[i] * static_cast<unsigned long>(i);
  Integer bound = 0;
  for (const auto& x : T) bound = std::max(bound, Integer(abs(x)));
  bound += 1;

  Integer prime = 2;
  for (;;) {
    mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
    if (prime > 200000) throw DomainError("no suitable prime for root lifting");
    unsigned long pr = prime.get_ui();
    std::vector<Integer> local;
    bool ok = true;
    for (unsigned long r = 0; r < pr && ok; ++r) {
      Integer x = r;
      if (sgn(mod_pos(horner(T, x), prime)) != 0) continue;
      if (sgn(mod_pos(horner(dT, x), prime)) == 0) ok = false;
      local.push_back(x);
    }
    if (!ok) continue;
    for (Integer r : local) {
      Integer M = prime;
      while (M <= 2 * bound) {
        Integer M2 = M * M;
        Integer d = mod_pos(horner(dT, r), M2), inv;
        mpz_invert(inv.get_mpz_t(), d.get_mpz_t(), M2.get_mpz_t());
        r = mod_pos(r - horner(T, r) * inv, M2);
        M = M2;
      }
      if (2 * r > M) r -= M;
      if (sgn(horner(T, r)) == 0) roots.push_back(Rational(r, an));  // canonicalized below
    }
    break;
  }
  for (auto& r : roots) r.canonicalize();
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace diffgal
