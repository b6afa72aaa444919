#include <stdexcept>

#include "diffgal/errors.hpp"
#include "diffgal/galois_linear.hpp"
#include "diffgal/internality.hpp"
#include "galois_detail.hpp"

namespace diffgal {

using namespace detail;

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  Integer a = q.get_num(), b = q.get_den();
  if (!mpz_perfect_square_p(a.get_mpz_t()) || !mpz_perfect_square_p(b.get_mpz_t())) return std::nullopt;
  Integer ra, rb;
  mpz_sqrt(ra.get_mpz_t(), a.get_mpz_t());
  mpz_sqrt(rb.get_mpz_t(), b.get_mpz_t());
  Rational r(ra, rb);
  r.canonicalize();
  return r;
}

Rational small_rational(std::mt19937_64& rng, bool nonzero) {
  for (;;) {
    Rational r(uniform_index(rng, 11) - 5, 1 + uniform_index(rng, 4));
    r.canonicalize();
    if (!nonzero || !is_zero(r)) return r;
  }
}

// F = (z^2, zw, w^2)/det^2 at a 2x2 matrix.
std::vector<RationalFunction> row_family_at(const MatrixRF& Y) {
  RationalFunction d2 = det_rf(Y).pow(2);
  const auto& z = Y(1, 0);
  const auto& w = Y(1, 1);
  return {z * z / d2, z * w / d2, w * w / d2};
}

}  // namespace

bool is_quadratic_row_family(const LinearDifferenceSystem& sys, const std::vector<Invariant>& F) {
  if (sys.n() != 2 || F.size() != 3) return false;
  Polynomial z = Polynomial::var(sys.entry(1, 0)), w = Polynomial::var(sys.entry(1, 1));
  std::vector<Polynomial> want{z * z, z * w, w * w};
  for (std::size_t i = 0; i < 3; ++i)
    if (F[i].k != 2 || F[i].p != want[i]) return false;
  return true;
}

std::optional<MatrixQ> sample_fiber_point(const std::vector<Rational>& e, std::mt19937_64& rng) {
  if (e.size() != 3) throw DomainError("expected a point (d, e, f)");
  Rational alpha, beta;
  if (!is_zero(e[0])) {
    auto r = rational_sqrt(e[0]);
    if (!r) return std::nullopt;
    alpha = *r;
    beta = e[1] / alpha;
  } else {
    auto r = rational_sqrt(e[2]);
    if (!r) return std::nullopt;
    alpha = 0;
    beta = *r;
  }
  Rational delta = small_rational(rng, true);
  if (uniform_index(rng, 2)) delta = -delta;
  Rational sign = uniform_index(rng, 2) ? 1 : -1;
  Rational z = sign * alpha * delta, w = sign * beta * delta, x, y;
  if (!is_zero(w)) {
    y = small_rational(rng, false);
    x = (delta + y * z) / w;
  } else {
    x = small_rational(rng, false);
    y = (x * w - delta) / z;
  }
  return MatrixQ::from_rows({{x, y}, {z, w}});
}

TorsorMembership torsor_family_membership(const LinearDifferenceSystem& sys,
                                          const std::vector<Invariant>& F,
                                          const std::vector<RationalFunction>& e,
                                          const MatrixRF& g, std::mt19937_64& rng,
                                          unsigned samples) {
  if (e.size() != F.size()) throw DomainError("expected one value of e per invariant");
  std::set<std::string> ev(sys.entries().begin(), sys.entries().end());
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (const auto& v : e[i].vars())
      if (ev.count(v)) throw DomainError("e_" + std::to_string(i + 1) + " involves a matrix entry");
    if (!is_constant(sys.field(), e[i]))
      throw DomainError("e_" + std::to_string(i + 1) + " = " + e[i].str() + " is not a constant");
  }
  require_invertible(g);
  if (g.rows() != sys.n()) throw DomainError("g has the wrong size");
  MatrixRF Z = inverse(g);
  TorsorMembership out;

  if (is_quadratic_row_family(sys, F)) {
    const auto &d = e[0], &m = e[1], &f = e[2];
    if (d.is_zero() && m.is_zero() && f.is_zero())
      throw DomainError("e = (0, 0, 0) is not in the image of F");
    if (m * m != d * f) throw DomainError("s^2 != r*t: e = (" + d.str() + ", " + m.str() + ", " + f.str() +
                                          ") is outside the image of F");
    // F(Y Z) = e on the fiber, written in the entries of Z.
    const auto &p = Z(0, 0), &q = Z(0, 1), &r = Z(1, 0), &s = Z(1, 1);
    RationalFunction dz2 = det_rf(Z).pow(2), two(2);
    bool member = d * p * p + two * m * p * r + f * r * r == d * dz2 &&
                  d * p * q + m * (p * s + r * q) + f * r * s == m * dz2 &&
                  d * q * q + two * m * q * s + f * s * s == f * dz2;
    out.member = member;
    out.method = "explicit-2x2";
    bool rational = d.is_constant() && m.is_constant() && f.is_constant();
    if (!rational) return out;
    std::vector<Rational> eq{d.constant_value(), m.constant_value(), f.constant_value()};
    for (unsigned i = 0; i < samples; ++i) {
      auto Y = sample_fiber_point(eq, rng);
      if (!Y) break;
      MatrixRF Yrf = Y->map([](const Rational& v) { return RationalFunction(v); });
      if (row_family_at(Yrf) != e) throw std::logic_error("sampled point is not on the fiber");
      bool direct = row_family_at(Yrf * Z) == e;
      ++out.samples;
      if (direct != member) ++out.disagreements;
    }
    return out;
  }

  RationalFunction dz = det_rf(Z);
  for (const auto& inv : F)
    if (linear_substitute(sys, inv.p, Z, false) != dz.pow(inv.k) * RationalFunction(inv.p))
      throw Unsupported("deciding g in H_e needs reduction modulo the fiber ideal; only the 2x2 row family "
                        "and g preserving F identically are handled");
  out.member = true;
  out.method = "right-invariant";
  return out;
}

}  // namespace diffgal
