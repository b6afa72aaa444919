#include "diffgal/galois_linear.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "diffgal/errors.hpp"
#include "galois_detail.hpp"

namespace diffgal {

// ---------------------------------------------------------------------------
// Shared helpers.

namespace detail {

Polynomial poly_lcm(const Polynomial& a, const Polynomial& b) {
  return exact_div(a * b, gcd(a, b)).primitive();
}

Polynomial sigma_coeffs(const LinearDifferenceSystem& sys, const Polynomial& p, long k) {
  const auto& s = sys.field().sigma();
  if (s.kind == SigmaOperator::Kind::identity || !p.has_var("t")) return p;
  return p.substitute({{"t", sigma_image_of_t(s, k).as_polynomial()}});
}

std::map<unsigned, Polynomial> split_by_degree(const Polynomial& p, const std::set<std::string>& vars) {
  const auto& pv = p.vars();
  std::vector<bool> mask(pv.size());
  for (std::size_t i = 0; i < pv.size(); ++i) mask[i] = vars.count(pv[i]) > 0;
  std::map<unsigned, Polynomial::Terms> parts;
  for (const auto& [e, c] : p.terms()) {
    unsigned d = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (mask[i]) d += e[i];
    parts[d].emplace(e, c);
  }
  std::map<unsigned, Polynomial> out;
  for (auto& [d, t] : parts) out.emplace(d, Polynomial::from_terms(pv, std::move(t)));
  return out;
}

std::map<Exponents, Polynomial> split_by_keys(const Polynomial& p, const std::vector<std::string>& keys) {
  const auto& pv = p.vars();
  std::vector<int> slot(pv.size(), -1);
  std::vector<std::string> rest;
  std::vector<std::size_t> rest_of;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    auto it = std::find(keys.begin(), keys.end(), pv[i]);
    if (it != keys.end()) {
      slot[i] = static_cast<int>(it - keys.begin());
    } else {
      rest_of.push_back(i);
      rest.push_back(pv[i]);
    }
  }
  std::map<Exponents, Polynomial::Terms> parts;
  for (const auto& [e, c] : p.terms()) {
    Exponents key(keys.size(), 0), r;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (slot[i] >= 0) key[static_cast<std::size_t>(slot[i])] = e[i];
    for (auto i : rest_of) r.push_back(e[i]);
    parts[key].emplace(std::move(r), c);
  }
  std::map<Exponents, Polynomial> out;
  for (auto& [k, t] : parts) out.emplace(k, Polynomial::from_terms(rest, std::move(t)));
  return out;
}

RationalFunction linear_substitute(const LinearDifferenceSystem& sys, const Polynomial& p,
                                   const MatrixRF& M, bool left) {
  std::size_t n = sys.n();
  Polynomial L(1);
  for (const auto& x : M.data()) L = poly_lcm(L, x.den());
  std::vector<Polynomial> LM;
  for (const auto& x : M.data()) LM.push_back((x * RationalFunction(L)).as_polynomial());
  std::map<std::string, Polynomial> images;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial s;
      for (std::size_t l = 0; l < n; ++l) {
        if (left)
          s += LM[i * n + l] * Polynomial::var(sys.entry(l, j));
        else
          s += Polynomial::var(sys.entry(i, l)) * LM[l * n + j];
      }
      images.emplace(sys.entry(i, j), std::move(s));
    }
  std::set<std::string> ev(sys.entries().begin(), sys.entries().end());
  auto parts = split_by_degree(p, ev);
  if (parts.empty()) return RationalFunction(0);
  unsigned top = parts.rbegin()->first;
  Polynomial num;
  for (const auto& [d, part] : parts) num += part.substitute(images) * L.pow(top - d);
  return RationalFunction(num, L.pow(top));
}

RationalFunction det_rf(const MatrixRF& m) { return det(m); }

void require_invertible(const MatrixRF& g) {
  if (!g.square()) throw DomainError("g must be square");
  if (det_rf(g).is_zero()) throw DomainError("singular matrix g");
}

}  // namespace detail

using namespace detail;

// ---------------------------------------------------------------------------
// Systems.

LinearDifferenceSystem::LinearDifferenceSystem(DifferenceFieldSpec field, MatrixRF A,
                                               std::vector<std::string> entries)
    : field_(std::move(field)), A_(std::move(A)), entries_(std::move(entries)) {
  if (!A_.square() || A_.rows() == 0) throw DomainError("A must be a non-empty square matrix");
  std::size_t n = A_.rows();
  if (entries_.empty()) entries_ = default_entries(n);
  if (entries_.size() != n * n) throw DomainError("expected " + std::to_string(n * n) + " entry names");
  auto fs = field_.symbols();
  auto gs = group_variables(n);
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (fs.count(e)) throw DomainError("entry name '" + e + "' clashes with a field symbol");
    if (std::find(gs.begin(), gs.end(), e) != gs.end())
      throw DomainError("entry name '" + e + "' clashes with a group variable");
    if (!seen.insert(e).second) throw DomainError("duplicate entry name '" + e + "'");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& v : A_(i, j).vars())
        if (!fs.count(v))
          throw DomainError("A(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            ") uses undeclared symbol '" + v + "'");
  det_A_ = det(A_);
  if (det_A_.is_zero()) throw DomainError("det(A) = 0: A is not invertible");
  det_X_ = det(X()).as_polynomial();
}

MatrixRF LinearDifferenceSystem::X() const {
  std::size_t n = this->n();
  MatrixRF x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = Polynomial::var(entry(i, j));
  return x;
}

std::set<std::string> LinearDifferenceSystem::symbols() const {
  auto s = field_.symbols();
  s.insert(entries_.begin(), entries_.end());
  return s;
}

std::vector<std::string> LinearDifferenceSystem::default_entries(std::size_t n) {
  if (n == 1) return {"x"};
  if (n == 2) return {"x", "y", "z", "w"};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) out.push_back("x" + std::to_string(i) + std::to_string(j));
  return out;
}

std::vector<std::string> LinearDifferenceSystem::group_variables(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) out.push_back("g" + std::to_string(i) + std::to_string(j));
  return out;
}

RationalFunction Invariant::as_function(const LinearDifferenceSystem& sys) const {
  return RationalFunction(p, sys.det_X().pow(k));
}

std::string Invariant::str() const {
  if (k == 0) return p.str();
  std::string s = p.num_terms() > 1 ? "(" + p.str() + ")" : p.str();
  return s + "/det" + (k > 1 ? "^" + std::to_string(k) : "");
}

// ---------------------------------------------------------------------------
// sigma on k[X, 1/det X].

bool sigma_conjugation_check(const LinearDifferenceSystem& sys, const MatrixRF& g) {
  require_invertible(g);
  if (g.rows() != sys.n()) throw DomainError("g has the wrong size");
  MatrixRF rhs = sys.A() * g * inverse(sys.A());
  for (std::size_t i = 0; i < g.data().size(); ++i)
    if (sigma_apply(sys.field(), g.data()[i]) != rhs.data()[i]) return false;
  return true;
}

RationalFunction pv_sigma(const LinearDifferenceSystem& sys, const RationalFunction& h) {
  auto image = [&](const Polynomial& p) { return linear_substitute(sys, sigma_coeffs(sys, p, 1), sys.A(), true); };
  return image(h.num()) / image(h.den());
}

RationalFunction pv_sigma_inverse(const LinearDifferenceSystem& sys, const RationalFunction& h) {
  MatrixRF Ainv = inverse(sys.A());
  auto image = [&](const Polynomial& p) { return linear_substitute(sys, p, Ainv, true); };
  return sigma_apply(sys.field(), image(h.num()) / image(h.den()), -1);
}

bool verify_invariant(const LinearDifferenceSystem& sys, const Invariant& inv) {
  RationalFunction lhs = linear_substitute(sys, sigma_coeffs(sys, inv.p, 1), sys.A(), true);
  return lhs == sys.det_A().pow(inv.k) * RationalFunction(inv.p);
}

// ---------------------------------------------------------------------------
// Multiplicative relations.

std::vector<std::vector<Integer>> CharacterLattice::vectors() const {
  std::vector<std::vector<Integer>> out(basis.cols(), std::vector<Integer>(n));
  for (std::size_t c = 0; c < basis.cols(); ++c)
    for (std::size_t i = 0; i < n; ++i) out[c][i] = basis(i, c);
  return out;
}

bool CharacterLattice::contains(const std::vector<Integer>& m) const {
  if (m.size() != n) return false;
  auto vs = vectors();
  std::map<std::size_t, const std::vector<Integer>*> by_pivot;
  for (const auto& v : vs) {
    std::size_t p = n;
    while (p-- > 0 && is_zero(v[p])) {}
    by_pivot[p] = &v;
  }
  std::vector<Integer> r = m;
  for (std::size_t j = n; j-- > 0;) {
    if (is_zero(r[j])) continue;
    auto it = by_pivot.find(j);
    if (it == by_pivot.end()) return false;
    const auto& v = *it->second;
    if (!is_zero(Integer(r[j] % v[j]))) return false;
    Integer q = r[j] / v[j];
    for (std::size_t i = 0; i < n; ++i) r[i] -= q * v[i];
  }
  return true;
}

namespace {

// Pairwise coprime integers > 1 generating every input multiplicatively.
std::vector<Integer> gcd_free_basis(std::vector<Integer> xs) {
  std::vector<Integer> b;
  for (auto& x : xs)
    if (x > 1) b.push_back(x);
  for (bool changed = true; changed;) {
    changed = false;
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    for (std::size_t i = 0; i < b.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < b.size() && !changed; ++j) {
        Integer g = gcd(b[i], b[j]);
        if (g == 1) continue;
        Integer x = b[i] / g, y = b[j] / g;
        b.erase(b.begin() + static_cast<long>(j));
        b.erase(b.begin() + static_cast<long>(i));
        for (const Integer& v : {x, y, g})
          if (v > 1) b.push_back(v);
        changed = true;
      }
  }
  return b;
}

long valuation(Integer& x, const Integer& p) {
  long v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

CharacterLattice multiplicative_lattice(const std::vector<Rational>& values) {
  std::size_t n = values.size();
  std::vector<Integer> parts;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_zero(values[i])) throw DomainError("value " + std::to_string(i) + " is zero");
    parts.push_back(abs(values[i].get_num()));
    parts.push_back(values[i].get_den());
  }
  auto base = gcd_free_basis(parts);
  // Rows: one per base element, then the sign row s.m - 2y = 0.
  IntMatrix E(base.size() + 1, n + 1, Integer(0));
  for (std::size_t i = 0; i < n; ++i) {
    Integer num = abs(values[i].get_num()), den = values[i].get_den();
    for (std::size_t b = 0; b < base.size(); ++b)
      E(b, i) = valuation(num, base[b]) - valuation(den, base[b]);
    if (num != 1 || den != 1) throw std::logic_error("gcd-free basis does not cover the inputs");
    E(base.size(), i) = sgn(values[i]) < 0 ? 1 : 0;
  }
  E(base.size(), n) = -2;
  IntMatrix K = int_kernel(E);
  std::vector<std::vector<Integer>> proj;
  for (std::size_t c = 0; c < K.cols(); ++c) {
    std::vector<Integer> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = K(i, c);
    proj.push_back(std::move(v));
  }
  auto hb = hermite_basis(std::move(proj));
  CharacterLattice L;
  L.n = n;
  L.basis = IntMatrix(n, hb.size());
  for (std::size_t c = 0; c < hb.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) L.basis(i, c) = hb[c][i];
  for (const auto& v : L.vectors())
    if (!is_relation(values, v)) throw std::logic_error("lattice vector is not a relation");
  return L;
}

bool is_relation(const std::vector<Rational>& values, const std::vector<Integer>& m) {
  if (values.size() != m.size()) throw DomainError("relation length mismatch");
  Rational prod = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i].fits_slong_p()) throw DomainError("exponent too large");
    prod *= pow(values[i], m[i].get_si());
  }
  return prod == 1;
}

// ---------------------------------------------------------------------------
// G_A in the diagonalizable case.

GaGroup ga_group(const LinearDifferenceSystem& sys) {
  std::size_t n = sys.n();
  MatrixQ A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = sys.A()(i, j);
      if (!a.is_constant())
        throw Unsupported("G_A needs a matrix with rational entries; A(" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") = " + a.str());
      A(i, j) = a.constant_value();
    }
  MatrixRF charm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      charm(i, j) = (i == j ? RationalFunction(Polynomial::var("lambda")) : RationalFunction(0)) -
                    RationalFunction(A(i, j));
  Polynomial cp = det(charm).as_polynomial();
  auto roots = rational_roots(cp, "lambda");
  GaGroup g;
  std::vector<std::vector<Rational>> columns;
  std::size_t total = 0;
  for (const auto& r : roots) {
    Polynomial lin = Polynomial::var("lambda") - Polynomial(r), rest = cp, q;
    std::size_t alg = 0;
    while (try_exact_div(rest, lin, q)) {
      rest = q;
      ++alg;
    }
    MatrixQ shifted = A;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= r;
    auto vecs = kernel_basis(shifted);
    if (vecs.size() < alg)
      throw Unsupported("A is not diagonalizable: eigenvalue " + to_string(r) + " has algebraic multiplicity " +
                        std::to_string(alg) + " but geometric multiplicity " + std::to_string(vecs.size()));
    for (auto& v : vecs) {
      columns.push_back(std::move(v));
      g.eigenvalues.push_back(r);
    }
    total += alg;
  }
  if (total < n)
    throw Unsupported("A has irrational or non-real eigenvalues: characteristic polynomial " + cp.str());
  g.P = MatrixQ(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) g.P(i, c) = columns[c][i];
  g.lattice = multiplicative_lattice(g.eigenvalues);
  auto gv = LinearDifferenceSystem::group_variables(n);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Polynomial e;
      for (std::size_t l = 0; l < n; ++l)
        e += Polynomial::var(gv[i * n + l]).scaled(A(l, j)) - Polynomial::var(gv[l * n + j]).scaled(A(i, l));
      if (e.is_zero()) continue;
      e = e.primitive();
      if (seen.insert(e.str()).second) g.centralizer.push_back(e);
    }
  g.equality = sys.field().sigma().kind == SigmaOperator::Kind::identity;
  return g;
}

bool ga_contains(const GaGroup& g, const MatrixQ& m) {
  std::size_t n = g.P.rows();
  if (m.rows() != n || m.cols() != n) return false;
  MatrixQ d = inverse(g.P) * m * g.P;
  std::vector<Rational> diag(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !is_zero(d(i, j))) return false;
      if (i == j) diag[i] = d(i, i);
    }
  for (const auto& x : diag)
    if (is_zero(x)) return false;
  for (const auto& v : g.lattice.vectors())
    if (!is_relation(diag, v)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Invariant search.

namespace {

void monomials(std::size_t vars, unsigned degree, Exponents& cur, std::size_t pos,
               std::vector<Exponents>& out) {
  if (pos + 1 == vars) {
    cur[pos] = degree;
    out.push_back(cur);
    return;
  }
  for (unsigned e = degree + 1; e-- > 0;) {
    cur[pos] = e;
    monomials(vars, degree - e, cur, pos + 1, out);
  }
}

Polynomial monomial(const std::vector<std::string>& names, const Exponents& e) {
  Polynomial p(1);
  for (std::size_t i = 0; i < names.size(); ++i)
    if (e[i]) p *= Polynomial::var(names[i], e[i]);
  return p;
}

std::size_t count_monomials(std::size_t vars, unsigned degree) {
  // C(degree + vars - 1, vars - 1), saturating.
  long double c = 1;
  for (std::size_t i = 1; i < vars; ++i) c = c * static_cast<long double>(degree + i) / static_cast<long double>(i);
  return c > 1e18L ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(c + 0.5L);
}

using SparseRows = std::map<Exponents, std::map<std::size_t, Polynomial>>;

// Kernel of a sparse polynomial matrix over the coefficient field. A rational
// specialization of the coefficients locates the support of the kernel; the
// exact elimination then runs on those columns only. Accepted only when the
// exact kernel there is as large as the specialized one, which bounds the
// generic kernel from above.
std::vector<std::vector<RationalFunction>> sparse_kernel(const SparseRows& rows, std::size_t ncols) {
  std::set<std::string> vars;
  for (const auto& [key, row] : rows)
    for (const auto& [c, coeff] : row) vars.insert(coeff.vars().begin(), coeff.vars().end());
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<long> num(-97, 97), den(1, 13);
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::map<std::string, Rational> point;
    for (const auto& v : vars) {
      long a = num(rng);
      Rational q(a == 0 ? 1 : a, den(rng));
      q.canonicalize();
      point[v] = q;
    }
    std::vector<std::vector<Rational>> qrows;
    for (const auto& [key, row] : rows) {
      std::vector<Rational> r(ncols, Rational(0));
      for (const auto& [c, coeff] : row) r[c] = coeff.evaluate(point);
      qrows.push_back(std::move(r));
    }
    auto qk = q_kernel(qrows, ncols);
    if (qk.empty()) return {};
    std::vector<std::size_t> support;
    for (std::size_t c = 0; c < ncols; ++c)
      if (std::any_of(qk.begin(), qk.end(), [&](const auto& v) { return sgn(v[c]) != 0; })) support.push_back(c);
    std::map<std::size_t, std::size_t> local;
    for (std::size_t i = 0; i < support.size(); ++i) local[support[i]] = i;
    std::vector<const std::map<std::size_t, Polynomial>*> used;
    for (const auto& [key, row] : rows)
      if (std::any_of(row.begin(), row.end(), [&](const auto& e) { return local.count(e.first) > 0; }))
        used.push_back(&row);
    MatrixRF M(used.size(), support.size());
    for (std::size_t r = 0; r < used.size(); ++r)
      for (const auto& [c, coeff] : *used[r]) {
        auto it = local.find(c);
        if (it != local.end()) M(r, it->second) = RationalFunction(coeff);
      }
    auto small = kernel_basis(M);
    if (small.size() != qk.size()) continue;
    std::vector<std::vector<RationalFunction>> out;
    for (const auto& v : small) {
      std::vector<RationalFunction> full(ncols, RationalFunction(0));
      for (std::size_t i = 0; i < support.size(); ++i) full[support[i]] = v[i];
      out.push_back(std::move(full));
    }
    return out;
  }
  MatrixRF M(rows.size(), ncols);
  std::size_t r = 0;
  for (const auto& [key, row] : rows) {
    for (const auto& [c, coeff] : row) M(r, c) = RationalFunction(coeff);
    ++r;
  }
  return kernel_basis(M);
}

// Divide out the gcd of the coefficients over the parameters and make primitive.
Polynomial normalize_invariant(const Polynomial& p, const std::vector<std::string>& keys) {
  Polynomial g;
  for (const auto& [k, c] : split_by_keys(p, keys)) g = g.is_zero() ? c : gcd(g, c);
  return exact_div(p, g).primitive();
}

}  // namespace

InvariantSearchResult invariant_search(const LinearDifferenceSystem& sys, const SearchBounds& b) {
  InvariantSearchResult res;
  res.bounds = b;
  const auto& names = sys.entries();
  std::size_t N = names.size();
  // Under the identity t is a constant and joins the coefficients.
  bool t_moves = sys.field().sigma().kind != SigmaOperator::Kind::identity;
  unsigned m = t_moves ? b.m : 0;
  std::vector<std::string> keys;
  if (t_moves) keys.push_back("t");
  keys.insert(keys.end(), names.begin(), names.end());
  for (unsigned d = 0; d <= b.d; ++d) {
    std::size_t size = count_monomials(N, d);
    if (size == static_cast<std::size_t>(-1) || size * (m + 1) > b.max_basis)
      throw GuardExceeded("invariant search basis of degree " + std::to_string(d) + " has more than " +
                          std::to_string(b.max_basis) + " elements");
  }
  Polynomial L(1);
  for (const auto& x : sys.A().data()) L = poly_lcm(L, x.den());
  for (unsigned k = 0; k <= b.k_max; ++k) {
    RationalFunction dk = sys.det_A().pow(k);
    for (unsigned d = 0; d <= b.d; ++d) {
      if (k == 0 && d == 0) continue;
      std::vector<Exponents> monos;
      Exponents cur(N, 0);
      monomials(N, d, cur, 0, monos);
      std::vector<Polynomial> basis;
      for (unsigned j = 0; j <= m; ++j)
        for (const auto& e : monos) basis.push_back(Polynomial::var("t", j) * monomial(names, e));
      RationalFunction clear(L.pow(d) * dk.den());
      SparseRows rows;
      for (std::size_t c = 0; c < basis.size(); ++c) {
        RationalFunction img = linear_substitute(sys, sigma_coeffs(sys, basis[c], 1), sys.A(), true) -
                               dk * RationalFunction(basis[c]);
        Polynomial poly = (img * clear).as_polynomial();
        for (auto& [key, coeff] : split_by_keys(poly, keys)) rows[key].emplace(c, std::move(coeff));
      }
      for (const auto& v : sparse_kernel(rows, basis.size())) {
        Polynomial den(1);
        for (const auto& x : v) den = poly_lcm(den, x.den());
        Polynomial p;
        for (std::size_t c = 0; c < v.size(); ++c)
          if (!v[c].is_zero()) p += (v[c] * RationalFunction(den)).as_polynomial() * basis[c];
        Invariant inv{normalize_invariant(p, keys), k};
        // p = c * det^k gives a constant h
        if (k > 0 && d == sys.n() * k) {
          RationalFunction q = RationalFunction(inv.p) / RationalFunction(sys.det_X().pow(k));
          if (std::none_of(names.begin(), names.end(), [&](const std::string& v) {
                return q.num().degree_in(v) > 0 || q.den().degree_in(v) > 0;
              }))
            continue;
        }
        if (!verify_invariant(sys, inv))
          throw std::logic_error("invariant search produced a non-invariant: " + inv.str());
        res.invariants.push_back(std::move(inv));
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Stabilizers and presentations.

bool stabilizer_check(const LinearDifferenceSystem& sys, const std::vector<Invariant>& invs,
                      const MatrixRF& g) {
  require_invertible(g);
  if (g.rows() != sys.n()) throw DomainError("g has the wrong size");
  RationalFunction dg = det_rf(g);
  for (const auto& inv : invs)
    if (linear_substitute(sys, inv.p, g, true) != dg.pow(inv.k) * RationalFunction(inv.p)) return false;
  return true;
}

std::vector<std::string> GroupPresentation::lines() const {
  std::vector<std::string> out = sigma_equations;
  for (const auto& e : equations) out.push_back(e.str() + " = 0");
  return out;
}

GroupPresentation emit_group_equations(const LinearDifferenceSystem& sys,
                                       const std::vector<Invariant>& invs) {
  std::size_t n = sys.n();
  auto gv = LinearDifferenceSystem::group_variables(n);
  MatrixRF G(n, n);
  for (std::size_t i = 0; i < n * n; ++i) G(i / n, i % n) = Polynomial::var(gv[i]);
  GroupPresentation pres;
  MatrixRF conj = sys.A() * G * inverse(sys.A());
  for (std::size_t i = 0; i < n * n; ++i)
    pres.sigma_equations.push_back("sigma(" + gv[i] + ") = " + conj.data()[i].str());
  pres.invariants = invs;
  Polynomial dg = det(G).as_polynomial();
  std::set<std::string> seen;
  for (const auto& inv : invs) {
    Polynomial e = linear_substitute(sys, inv.p, G, true).as_polynomial() - dg.pow(inv.k) * inv.p;
    for (auto& [key, coeff] : split_by_keys(e, sys.entries())) {
      Polynomial c = coeff.primitive();
      if (!c.is_zero() && seen.insert(c.str()).second) pres.equations.push_back(c);
    }
  }
  try {
    pres.lattice = ga_group(sys).lattice;
  } catch (const Unsupported&) {
  }
  return pres;
}

bool satisfies(const GroupPresentation& pres, const MatrixRF& g) {
  std::size_t n = g.rows();
  auto gv = LinearDifferenceSystem::group_variables(n);
  std::map<std::string, RationalFunction> at;
  for (std::size_t i = 0; i < n * n; ++i) at.emplace(gv[i], g.data()[i]);
  for (const auto& e : pres.equations)
    if (!RationalFunction(e).substitute(at).is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Difference ideals.

StabilityReport difference_ideal_stability(const LinearDifferenceSystem& sys,
                                           const std::vector<Invariant>& invs,
                                           const std::vector<RationalFunction>& c) {
  if (invs.size() != c.size()) throw DomainError("expected one constant per invariant");
  std::set<std::string> ev(sys.entries().begin(), sys.entries().end());
  StabilityReport rep;
  for (std::size_t i = 0; i < invs.size(); ++i) {
    for (const auto& v : c[i].vars())
      if (ev.count(v)) throw DomainError("c_" + std::to_string(i + 1) + " involves a matrix entry");
    if (!is_constant(sys.field(), c[i]))
      throw DomainError("c_" + std::to_string(i + 1) + " = " + c[i].str() + " is not a constant");
    RationalFunction h = invs[i].as_function(sys) - c[i];
    RationalFunction img = pv_sigma(sys, h);
    RationalFunction gen = h * RationalFunction(sys.det_X().pow(invs[i].k));
    RationalFunction gen_img = pv_sigma(sys, gen);
    rep.generators.push_back(gen.num());
    rep.images.push_back(gen_img.num());
    if (img != h && rep.ok) {
      rep.ok = false;
      rep.failing = static_cast<int>(i);
      rep.witness = gen_img.num().str();
    }
  }
  return rep;
}

}  // namespace diffgal
