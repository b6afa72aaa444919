#include "diffgal/difference_field.hpp"

#include <algorithm>

#include "diffgal/errors.hpp"

namespace diffgal {

SigmaOperator SigmaOperator::shift(const Rational& c) {
  if (is_zero(c)) throw DomainError("shift by 0 is the identity operator");
  return {Kind::shift, c};
}

SigmaOperator SigmaOperator::dilation(const Rational& q) {
  if (is_zero(q)) throw DomainError("dilation by 0 is not an automorphism");
  if (q == 1 || q == -1) throw DomainError("dilation factor must satisfy |q| != 1");
  return {Kind::dilation, q};
}

SigmaOperator SigmaOperator::parse(std::string_view s) {
  if (s == "identity") return identity();
  auto colon = s.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("sigma must be identity, shift:<c> or dilation:<q>, got '" + std::string(s) + "'");
  auto kind = s.substr(0, colon);
  Rational v = parse_rational(s.substr(colon + 1));
  if (kind == "shift") return shift(v);
  if (kind == "dilation") return dilation(v);
  throw ParseError("unknown sigma kind '" + std::string(kind) + "'");
}

SigmaOperator SigmaOperator::inverse() const {
  switch (kind) {
    case Kind::shift: return {kind, -c};
    case Kind::dilation: return {kind, 1 / c};
    default: return *this;
  }
}

std::string SigmaOperator::str() const {
  switch (kind) {
    case Kind::shift: return "shift:" + c.get_str();
    case Kind::dilation: return "dilation:" + c.get_str();
    default: return "identity";
  }
}

DifferenceFieldSpec::DifferenceFieldSpec(SigmaOperator sigma, std::vector<std::string> parameters)
    : sigma_(sigma), parameters_(std::move(parameters)) {
  std::set<std::string> seen;
  for (const auto& p : parameters_) {
    if (p == "t") throw DomainError("parameter name 't' is reserved");
    if (p.empty()) throw DomainError("empty parameter name");
    if (!seen.insert(p).second) throw DomainError("duplicate parameter '" + p + "'");
  }
}

std::set<std::string> DifferenceFieldSpec::symbols() const {
  std::set<std::string> s(parameters_.begin(), parameters_.end());
  s.insert("t");
  return s;
}

RationalFunction sigma_image_of_t(const SigmaOperator& s, long k) {
  Polynomial t = Polynomial::var("t");
  switch (s.kind) {
    case SigmaOperator::Kind::shift: return t + Polynomial(s.c * k);
    case SigmaOperator::Kind::dilation: return t.scaled(pow(s.c, k));
    default: return t;
  }
}

RationalFunction sigma_apply(const DifferenceFieldSpec& spec, const RationalFunction& f, long k) {
  if (k == 0 || spec.sigma().kind == SigmaOperator::Kind::identity) return f;
  if (!f.num().has_var("t") && !f.den().has_var("t")) return f;
  return f.substitute({{"t", sigma_image_of_t(spec.sigma(), k)}});
}

bool is_constant(const DifferenceFieldSpec& spec, const RationalFunction& f) {
  return sigma_apply(spec, f) == f;
}

SigmaCertificate::SigmaCertificate(const DifferenceFieldSpec& spec, const RationalFunction& a,
                                   RationalFunction r, unsigned m)
    : r_(std::move(r)), m_(m) {
  if (m_ == 0) throw DomainError("certificate exponent must be positive");
  if (r_.is_zero()) throw DomainError("certificate witness must be nonzero");
  // a^m r = sigma(r) after clearing denominators.
  if (a.pow(m_) * r_ != sigma_apply(spec, r_))
    throw DomainError("certificate check failed: a^m != sigma(r)/r for r = " + r_.str());
}

namespace {

Polynomial monic(const Polynomial& p) { return p.scaled(1 / p.leading_coeff()); }

// Cauchy bound on the absolute value of the roots of p in t.
Rational root_bound(const Polynomial& p) {
  auto c = dense_coeffs(p, "t");
  Rational m = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, Rational(abs(c[i] / c.back())));
  return m + 1;
}

Polynomial shifted(const Polynomial& p, const Rational& by) {
  if (!p.has_var("t")) return p;
  return p.substitute({{"t", Polynomial::var("t") + Polynomial(by)}});
}

std::optional<SigmaCertificate> constant_case(const DifferenceFieldSpec& spec,
                                              const RationalFunction& a, unsigned max_order) {
  RationalFunction power(1);
  for (unsigned m = 1; m <= max_order; ++m) {
    power *= a;
    if (power == RationalFunction(1)) return SigmaCertificate(spec, a, RationalFunction(1), m);
  }
  return std::nullopt;
}

}  // namespace

std::optional<SigmaCertificate> sigma_quotient_certificate(const DifferenceFieldSpec& spec,
                                                           const RationalFunction& a,
                                                           unsigned max_order) {
  if (a.is_zero()) throw DomainError("sigma-quotient of 0");
  if (max_order == 0) throw DomainError("max_order must be positive");
  const SigmaOperator& s = spec.sigma();
  if (s.kind == SigmaOperator::Kind::dilation)
    throw Unsupported("sigma-quotient certificates are not implemented for dilation operators");
  auto vars = a.vars();
  bool has_t = std::find(vars.begin(), vars.end(), "t") != vars.end();
  if (s.kind == SigmaOperator::Kind::identity || !has_t) return constant_case(spec, a, max_order);
  if (vars.size() > 1)
    throw Unsupported("sigma-quotient certificates under a shift need a in Q(t); got " + a.str());

  Rational kappa = a.num().leading_coeff() / a.den().leading_coeff();
  Polynomial N = monic(a.num()), D = monic(a.den());
  Rational window = (root_bound(N) + root_bound(D)) / abs(s.c);
  Integer K;
  mpz_cdiv_q(K.get_mpz_t(), window.get_num_mpz_t(), window.get_den_mpz_t());
  long kmax = K.get_si();

  RationalFunction r(1);
  std::vector<long> ks;
  for (long k = 1; k <= kmax; ++k) ks.push_back(k);
  for (long k = 1; k <= kmax; ++k) ks.push_back(-k);
  for (long k : ks) {
    if (N.is_constant() || D.is_constant()) break;
    Polynomial u = gcd(N, shifted(D, s.c * k));
    if (u.is_constant()) continue;
    u = monic(u);
    Polynomial v = shifted(u, -s.c * k);
    N = exact_div(N, u);
    D = exact_div(D, v);
    // sigma^k(v)/v telescopes to sigma(w)/w with w = prod_{j<|k|} sigma^j(.)
    const Polynomial& base = k > 0 ? v : u;
    Polynomial w(1);
    for (long j = 0; j < std::abs(k); ++j) w *= shifted(base, s.c * j);
    r = k > 0 ? r * RationalFunction(w) : r / RationalFunction(w);
  }
  if (!N.is_constant() || !D.is_constant()) return std::nullopt;
  unsigned m0 = kappa == 1 ? 1 : kappa == -1 ? 2 : 0;
  if (m0 == 0 || m0 > max_order) return std::nullopt;
  return SigmaCertificate(spec, a, r.pow(m0), m0);
}

std::string Order1Group::label() const {
  switch (kind) {
    case Kind::trivial: return "trivial";
    case Kind::mu: return "mu_" + std::to_string(m);
    default: return "full-multiplicative-group-up-to-bound";
  }
}

Order1Group order1_group(const DifferenceFieldSpec& spec, const RationalFunction& a,
                         unsigned max_order) {
  auto cert = sigma_quotient_certificate(spec, a, max_order);
  Order1Group g;
  g.bound = max_order;
  if (!cert) {
    g.kind = Order1Group::Kind::full_up_to_bound;
    return g;
  }
  g.m = cert->m();
  g.kind = g.m == 1 ? Order1Group::Kind::trivial : Order1Group::Kind::mu;
  g.certificate = std::move(cert);
  return g;
}

}  // namespace diffgal
