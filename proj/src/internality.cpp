#include "diffgal/internality.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "diffgal/errors.hpp"

namespace diffgal {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

// Assigns class indices to keys in order of first occurrence.
template <class Key>
struct Interner {
  std::map<Key, int> index;
  std::vector<Key> items;
  int get(const Key& k) {
    auto [it, inserted] = index.try_emplace(k, static_cast<int>(items.size()));
    if (inserted) items.push_back(k);
    return it->second;
  }
  int find(const Key& k) const {
    auto it = index.find(k);
    return it == index.end() ? -1 : it->second;
  }
};

Perm identity_perm(int n) {
  Perm p(idx(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm invert(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[idx(p[i])] = static_cast<int>(i);
  return q;
}

void finalize_group(std::vector<AutPair>& g, const char* who) {
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  if (!is_group(g)) throw std::logic_error(std::string(who) + ": result is not a group");
}

}  // namespace

FiniteInternality FiniteInternality::make(int nQ, int nD, std::vector<int> piX,
                                          std::vector<std::vector<int>> f) {
  FiniteInternality s;
  s.nQ = nQ;
  s.nD = nD;
  s.nX = static_cast<int>(piX.size());
  s.nC = nQ * nD;
  s.piX = std::move(piX);
  s.f = std::move(f);
  s.piC.resize(idx(std::max(s.nC, 0)));
  for (int c = 0; c < s.nC; ++c) s.piC[idx(c)] = c / nQ;
  return s;
}

ValidationReport validate(const FiniteInternality& s) {
  auto fail = [](std::string kind, std::string msg, std::vector<int> w) {
    return ValidationReport{false, std::move(kind), std::move(msg), std::move(w)};
  };
  if (s.nQ < 1 || s.nD < 1 || s.nX < 1)
    return fail("shape", "nQ, nD and nX must be positive", {});
  if (s.nC != s.nQ * s.nD || static_cast<int>(s.piC.size()) != s.nC)
    return fail("shape", "C must consist of nD fibers of size nQ", {});
  if (static_cast<int>(s.piX.size()) != s.nX || static_cast<int>(s.f.size()) != s.nX)
    return fail("shape", "piX and f must have one entry per element of X", {});
  for (int x = 0; x < s.nX; ++x) {
    if (s.piX[idx(x)] < 0 || s.piX[idx(x)] >= s.nD)
      return fail("shape", "piX[" + std::to_string(x) + "] out of range", {x});
    if (static_cast<int>(s.f[idx(x)].size()) != s.nQ)
      return fail("shape", "f[" + std::to_string(x) + "] must have nQ entries", {x});
    for (int q = 0; q < s.nQ; ++q) {
      int c = s(q, x);
      if (c < 0 || c >= s.nC)
        return fail("shape", "f(" + std::to_string(q) + "," + std::to_string(x) + ") out of range",
                    {q, x});
    }
  }
  for (int x = 0; x < s.nX; ++x)
    for (int q = 0; q < s.nQ; ++q)
      if (s.piC[idx(s(q, x))] != s.piX[idx(x)])
        return fail("fiber",
                    "f(" + std::to_string(q) + "," + std::to_string(x) + ") leaves the fiber of x",
                    {q, x});
  for (int x = 0; x < s.nX; ++x)
    for (int q = 0; q < s.nQ; ++q)
      for (int q2 = q + 1; q2 < s.nQ; ++q2)
        if (s(q, x) == s(q2, x))
          return fail("injective",
                      "f_" + std::to_string(x) + " is not injective: q=" + std::to_string(q) +
                          ", q'=" + std::to_string(q2),
                      {q, q2, x});
  for (int x = 0; x < s.nX; ++x)
    for (int y = x + 1; y < s.nX; ++y)
      if (s.f[idx(x)] == s.f[idx(y)])
        return fail("distinct", "f_" + std::to_string(x) + " and f_" + std::to_string(y) + " coincide",
                    {x, y});
  return {};
}

CanonicalFamily canonical_family(const std::vector<std::vector<bool>>& phi) {
  CanonicalFamily cf;
  Interner<std::vector<bool>> in;
  for (std::size_t p = 0; p < phi.size(); ++p) {
    int z = in.get(phi[p]);
    cf.class_of.push_back(z);
    if (z == static_cast<int>(cf.representative.size())) cf.representative.push_back(static_cast<int>(p));
  }
  cf.psi = in.items;
  return cf;
}

DerivedStructure derive(const FiniteInternality& s) {
  auto rep = validate(s);
  if (!rep.ok) throw DomainError("invalid structure: " + rep.message);
  DerivedStructure d;
  d.nX = s.nX;
  d.g.assign(idx(s.nX), std::vector<int>(idx(s.nC), -1));
  for (int x = 0; x < s.nX; ++x)
    for (int q = 0; q < s.nQ; ++q) d.g[idx(x)][idx(s(q, x))] = q;

  // F as the canonical family of the pairs in X x_D X, Pi(x, y) = g_y o f_x.
  Interner<Perm> F;
  d.Pi.assign(idx(s.nX), std::vector<int>(idx(s.nX), -1));
  for (int x = 0; x < s.nX; ++x)
    for (int y = 0; y < s.nX; ++y) {
      if (s.piX[idx(x)] != s.piX[idx(y)]) continue;
      Perm u(idx(s.nQ));
      for (int q = 0; q < s.nQ; ++q) u[idx(q)] = d.g[idx(y)][idx(s(q, x))];
      d.Pi[idx(x)][idx(y)] = F.get(u);
    }
  d.F = F.items;
  for (const auto& u : d.F) d.Finv.push_back(F.find(invert(u)));

  // H: classes of f_y o f_x^-1 as partial maps of C.
  Interner<std::vector<int>> H;
  d.Hindex.assign(idx(s.nX), std::vector<int>(idx(s.nX), -1));
  for (int x = 0; x < s.nX; ++x)
    for (int y = 0; y < s.nX; ++y) {
      std::vector<int> h(idx(s.nC), -1);
      for (int q = 0; q < s.nQ; ++q) h[idx(s(q, x))] = s(q, y);
      int k = H.get(h);
      d.Hindex[idx(x)][idx(y)] = k;
      if (k == static_cast<int>(d.Hdom.size())) {
        d.Hdom.push_back(s.piX[idx(x)]);
        d.Hcod.push_back(s.piX[idx(y)]);
      }
    }
  d.H = H.items;

  Interner<std::vector<int>> Xbar;
  for (int x = 0; x < s.nX; ++x) Xbar.get(s.f[idx(x)]);
  d.mu.assign(d.H.size(), std::vector<int>(idx(s.nX), -1));
  for (std::size_t h = 0; h < d.H.size(); ++h)
    for (int x = 0; x < s.nX; ++x) {
      if (d.Hdom[h] != s.piX[idx(x)]) continue;
      std::vector<int> fn(idx(s.nQ));
      for (int q = 0; q < s.nQ; ++q) fn[idx(q)] = d.H[h][idx(s(q, x))];
      d.mu[h][idx(x)] = Xbar.get(fn);
    }
  d.nu.assign(d.F.size(), std::vector<int>(idx(s.nX), -1));
  for (std::size_t u = 0; u < d.F.size(); ++u) {
    const Perm& ui = d.F[idx(d.Finv[u])];
    for (int z = 0; z < s.nX; ++z) {
      std::vector<int> fn(idx(s.nQ));
      for (int q = 0; q < s.nQ; ++q) fn[idx(q)] = s(ui[idx(q)], z);
      d.nu[u][idx(z)] = Xbar.get(fn);
    }
  }
  d.Xbar = Xbar.items;
  return d;
}

AutPair compose(const AutPair& a, const AutPair& b) {
  AutPair c;
  c.tauQ.resize(b.tauQ.size());
  c.tauX.resize(b.tauX.size());
  for (std::size_t i = 0; i < b.tauQ.size(); ++i) c.tauQ[i] = a.tauQ[idx(b.tauQ[i])];
  for (std::size_t i = 0; i < b.tauX.size(); ++i) c.tauX[i] = a.tauX[idx(b.tauX[i])];
  return c;
}

AutPair inverse(const AutPair& a) { return {invert(a.tauQ), invert(a.tauX)}; }

bool is_autpair(const FiniteInternality& s, const AutPair& p) {
  for (int x = 0; x < s.nX; ++x)
    for (int q = 0; q < s.nQ; ++q)
      if (s(p.tauQ[idx(q)], p.tauX[idx(x)]) != s(q, x)) return false;
  return true;
}

bool is_group(const std::vector<AutPair>& g) {
  if (g.empty()) return false;
  std::set<AutPair> set(g.begin(), g.end());
  AutPair id{identity_perm(static_cast<int>(g[0].tauQ.size())),
             identity_perm(static_cast<int>(g[0].tauX.size()))};
  if (!set.count(id)) return false;
  for (const auto& a : g) {
    if (!set.count(inverse(a))) return false;
    for (const auto& b : g)
      if (!set.count(compose(a, b))) return false;
  }
  return true;
}

AutPair action_of(const DerivedStructure& d, int u) {
  AutPair p;
  p.tauQ = d.F[idx(u)];
  for (int x = 0; x < d.nX; ++x) {
    int y = d.nu[idx(u)][idx(x)];
    if (!d.in_X(y)) throw std::logic_error("nu(u, x) leaves X");
    p.tauX.push_back(y);
  }
  return p;
}

void check_formula_guard(const FiniteInternality& s, int max_size) {
  if (s.nQ > max_size || s.nX > max_size)
    throw GuardExceeded("formula groups are limited to nQ, nX <= " + std::to_string(max_size));
}

std::vector<AutPair> group_intdef1(const FiniteInternality& s, const DerivedStructure& d) {
  check_formula_guard(s);
  std::vector<int> verdict(d.F.size(), -1);
  for (int x = 0; x < s.nX; ++x)
    for (int y = 0; y < s.nX; ++y) {
      int u = d.Pi[idx(x)][idx(y)];
      if (u < 0) continue;
      bool ok = true;
      for (std::size_t h = 0; h < d.H.size() && ok; ++h)
        ok = d.in_X(d.mu[h][idx(x)]) == d.in_X(d.mu[h][idx(y)]);
      int v = ok ? 1 : 0;
      if (verdict[idx(u)] == -1)
        verdict[idx(u)] = v;
      else if (verdict[idx(u)] != v)
        throw std::logic_error("intdef1 predicate is not constant on a fiber of Pi");
    }
  std::vector<AutPair> g;
  for (std::size_t u = 0; u < d.F.size(); ++u)
    if (verdict[u] == 1) g.push_back(action_of(d, static_cast<int>(u)));
  finalize_group(g, "intdef1");
  return g;
}

std::vector<AutPair> group_intdef2(const FiniteInternality& s, const DerivedStructure& d) {
  check_formula_guard(s);
  std::vector<AutPair> g;
  for (std::size_t u = 0; u < d.F.size(); ++u) {
    bool ok = true;
    for (int z = 0; z < s.nX && ok; ++z)
      ok = d.in_X(d.nu[u][idx(z)]) && d.in_X(d.nu[idx(d.Finv[u])][idx(z)]);
    if (ok) g.push_back(action_of(d, static_cast<int>(u)));
  }
  finalize_group(g, "intdef2");
  return g;
}

HorribleResult group_horrible(const FiniteInternality& s) {
  check_formula_guard(s);
  const int nQ = s.nQ, nX = s.nX, nC = s.nC;
  // The relation f(q, x, c) as a flat table.
  std::vector<char> R(idx(nQ * nX * nC), 0);
  auto at = [&](int q, int x, int c) -> char& { return R[idx((q * nX + x) * nC + c)]; };
  for (int x = 0; x < nX; ++x)
    for (int q = 0; q < nQ; ++q) at(q, x, s(q, x)) = 1;

  HorribleResult out;
  std::vector<char> psi(idx(nQ * nC));
  for (int z = 0; z < nX; ++z)
    for (int w = 0; w < nX; ++w) {
      AutPair p;
      bool ok = true;
      for (int x = 0; x < nX && ok; ++x) {
        // psi(q, c) <=> exists p, d: f(q,w,d) & f(p,z,d) & f(p,x,c)
        for (int q = 0; q < nQ; ++q)
          for (int c = 0; c < nC; ++c) {
            bool e = false;
            for (int pp = 0; pp < nQ && !e; ++pp)
              for (int dd = 0; dd < nC && !e; ++dd)
                e = at(q, w, dd) && at(pp, z, dd) && at(pp, x, c);
            psi[idx(q * nC + c)] = e;
          }
        int found = -1;
        for (int y = 0; y < nX && found < 0; ++y) {
          bool match = true;
          for (int q = 0; q < nQ && match; ++q)
            for (int c = 0; c < nC && match; ++c) match = (at(q, y, c) != 0) == (psi[idx(q * nC + c)] != 0);
          if (match) found = y;
        }
        if (found < 0) ok = false;
        p.tauX.push_back(found);
      }
      if (!ok) continue;
      // (z, w)(p) = q <=> exists c: f(q,w,c) & f(p,z,c)
      for (int pp = 0; pp < nQ; ++pp) {
        int image = -1;
        for (int q = 0; q < nQ && image < 0; ++q)
          for (int c = 0; c < nC; ++c)
            if (at(q, w, c) && at(pp, z, c)) {
              image = q;
              break;
            }
        if (image < 0) throw std::logic_error("horribleQ: no image");
        p.tauQ.push_back(image);
      }
      out.pairs.emplace_back(z, w);
      out.group.push_back(std::move(p));
    }
  finalize_group(out.group, "horrible");
  return out;
}

std::vector<AutPair> brute_force_group(const FiniteInternality& s, int max_size) {
  if (s.nQ > max_size || s.nX > max_size)
    throw GuardExceeded("brute-force enumeration is limited to nQ, nX <= " + std::to_string(max_size));
  std::vector<AutPair> g;
  Perm tq = identity_perm(s.nQ);
  do {
    Perm tx = identity_perm(s.nX);
    do {
      AutPair p{tq, tx};
      if (is_autpair(s, p)) g.push_back(std::move(p));
    } while (std::next_permutation(tx.begin(), tx.end()));
  } while (std::next_permutation(tq.begin(), tq.end()));
  std::sort(g.begin(), g.end());
  return g;
}

// ---------------------------------------------------------------------------

int uniform_index(std::mt19937_64& rng, int n) {
  if (n <= 0) throw DomainError("uniform_index needs a positive range");
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  std::uint64_t v;
  do v = rng();
  while (v >= limit);
  return static_cast<int>(v % range);
}

namespace {

Perm random_perm(std::mt19937_64& rng, int n) {
  Perm p = identity_perm(n);
  for (int i = n - 1; i > 0; --i) std::swap(p[idx(i)], p[idx(uniform_index(rng, i + 1))]);
  return p;
}

long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

FiniteInternality random_structure(std::uint64_t seed, const StructureBounds& b) {
  if (b.nQ < 1 || b.nD < 1 || b.nX < b.nD)
    throw DomainError("bounds unsatisfiable: need nQ >= 1, nD >= 1 and nX >= nD");
  if (b.nQ > 8 || static_cast<long>(b.nX) > static_cast<long>(b.nD) * factorial(b.nQ))
    throw DomainError("bounds unsatisfiable: more maps requested than bijections per fiber");
  std::mt19937_64 rng(seed);
  std::vector<std::set<Perm>> used(idx(b.nD));
  std::vector<int> piX;
  std::vector<std::vector<int>> f;
  auto add = [&](int fiber, const Perm& p) {
    if (static_cast<int>(piX.size()) >= b.nX || !used[idx(fiber)].insert(p).second) return;
    piX.push_back(fiber);
    std::vector<int> row(idx(b.nQ));
    for (int q = 0; q < b.nQ; ++q) row[idx(q)] = fiber * b.nQ + p[idx(q)];
    f.push_back(std::move(row));
  };
  auto pick_fiber = [&]() {
    for (;;) {
      int d = uniform_index(rng, b.nD);
      if (static_cast<long>(used[idx(d)].size()) < factorial(b.nQ)) return d;
    }
  };
  // In symmetric mode only whole orbits of gamma are added, so its order must fit.
  auto order = [](const Perm& g) {
    Perm cur = g;
    int k = 1;
    while (std::any_of(cur.begin(), cur.end(), [&, i = 0](int v) mutable { return v != i++; })) {
      Perm nxt(cur.size());
      for (std::size_t q = 0; q < cur.size(); ++q) nxt[q] = g[idx(cur[q])];
      cur = std::move(nxt);
      ++k;
    }
    return k;
  };
  Perm gamma = random_perm(rng, b.nQ);
  for (int tries = 0; b.symmetric && order(gamma) * b.nD > b.nX; ++tries) {
    if (tries == 50) {
      std::iota(gamma.begin(), gamma.end(), 0);
      break;
    }
    gamma = random_perm(rng, b.nQ);
  }
  Perm gamma_inv = invert(gamma);
  int orbit = b.symmetric ? order(gamma) : 1;
  Perm fibers = random_perm(rng, b.nD);
  int next_fresh = 0;
  while (static_cast<int>(piX.size()) + orbit <= b.nX) {
    int d = next_fresh < b.nD ? fibers[idx(next_fresh++)] : pick_fiber();
    Perm p = random_perm(rng, b.nQ);
    if (used[idx(d)].count(p)) continue;
    add(d, p);
    if (!b.symmetric) continue;
    // The orbit p o gamma^-k keeps X closed under gamma.
    Perm cur = p;
    for (;;) {
      Perm nxt(cur.size());
      for (std::size_t q = 0; q < cur.size(); ++q) nxt[q] = cur[idx(gamma_inv[q])];
      if (nxt == p) break;
      add(d, nxt);
      cur = std::move(nxt);
    }
  }
  auto s = FiniteInternality::make(b.nQ, b.nD, std::move(piX), std::move(f));
  auto rep = validate(s);
  if (!rep.ok) throw std::logic_error("random_structure produced an invalid structure");
  return s;
}

StructureBounds random_bounds(std::mt19937_64& rng, int maxQ, int maxD, int maxX) {
  StructureBounds b;
  b.nQ = 1 + uniform_index(rng, maxQ);
  b.nD = 1 + uniform_index(rng, std::min(maxD, maxX));
  long cap = std::min<long>(maxX, b.nD * factorial(b.nQ));
  b.nX = b.nD + uniform_index(rng, static_cast<int>(cap) - b.nD + 1);
  b.symmetric = uniform_index(rng, 2) == 1;
  return b;
}

// ---------------------------------------------------------------------------

FiniteInternality cyclic_structure(int n) {
  std::vector<std::vector<int>> f(idx(n), std::vector<int>(idx(n)));
  for (int x = 0; x < n; ++x)
    for (int q = 0; q < n; ++q) f[idx(x)][idx(q)] = (q + x) % n;
  return FiniteInternality::make(n, 1, std::vector<int>(idx(n), 0), std::move(f));
}

std::vector<Perm> s3_elements() {
  std::vector<Perm> out;
  Perm p{0, 1, 2};
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

int s3_mul(int a, int b) {
  static const auto el = s3_elements();
  Perm c(3);
  for (int i = 0; i < 3; ++i) c[idx(i)] = el[idx(a)][idx(el[idx(b)][idx(i)])];
  return static_cast<int>(std::find(el.begin(), el.end(), c) - el.begin());
}

int s3_inv(int a) {
  for (int b = 0; b < 6; ++b)
    if (s3_mul(a, b) == 0) return b;
  return -1;
}

FiniteInternality s3_structure() {
  std::vector<std::vector<int>> f(6, std::vector<int>(6));
  for (int x = 0; x < 6; ++x)
    for (int q = 0; q < 6; ++q) f[idx(x)][idx(q)] = s3_mul(q, x);
  return FiniteInternality::make(6, 1, std::vector<int>(6, 0), std::move(f));
}

}  // namespace diffgal
