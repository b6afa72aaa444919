#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "diffgal/errors.hpp"
#include "diffgal/internality.hpp"

namespace diffgal {

namespace {

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

int sort_size(const FiniteInternality& s, Sort k) {
  switch (k) {
    case Sort::Q: return s.nQ;
    case Sort::X: return s.nX;
    default: return s.nC;
  }
}

std::vector<int> apply(const AutPair& p, const std::vector<Sort>& sorts, const std::vector<int>& t) {
  std::vector<int> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    switch (sorts[i]) {
      case Sort::Q: out[i] = p.tauQ[idx(t[i])]; break;
      case Sort::X: out[i] = p.tauX[idx(t[i])]; break;
      default: out[i] = t[i];
    }
  }
  return out;
}

// Per relation, per x: the sorted parameter tuples of phi*(x, .).
using StarFibers = std::vector<std::vector<std::vector<std::vector<int>>>>;

StarFibers star_fibers(const FiniteInternality& s, const std::vector<DeltaStar>& star) {
  StarFibers out(star.size(), std::vector<std::vector<std::vector<int>>>(idx(s.nX)));
  for (std::size_t r = 0; r < star.size(); ++r)
    for (const auto& t : star[r].tuples)
      out[r][idx(t[0])].emplace_back(t.begin() + 1, t.end());
  return out;
}

}  // namespace

DeltaRelation normalized(const FiniteInternality& s, DeltaRelation r) {
  for (std::size_t i = 0; i < r.tuples.size(); ++i) {
    const auto& t = r.tuples[i];
    if (t.size() != r.sorts.size())
      throw DomainError("tuple " + std::to_string(i) + " does not match the relation arity");
    for (std::size_t j = 0; j < t.size(); ++j)
      if (t[j] < 0 || t[j] >= sort_size(s, r.sorts[j]))
        throw DomainError("tuple " + std::to_string(i) + " entry " + std::to_string(j) + " out of range");
  }
  std::sort(r.tuples.begin(), r.tuples.end());
  r.tuples.erase(std::unique(r.tuples.begin(), r.tuples.end()), r.tuples.end());
  return r;
}

std::vector<DeltaStar> delta_star(const FiniteInternality& s, const DerivedStructure& d,
                                  const std::vector<DeltaRelation>& delta) {
  std::vector<DeltaStar> out;
  for (const auto& r : delta) {
    DeltaStar st{r.sorts, {}};
    for (int x = 0; x < s.nX; ++x)
      for (const auto& t : r.tuples) {
        std::vector<int> row{x};
        for (std::size_t j = 0; j < t.size(); ++j) {
          switch (r.sorts[j]) {
            case Sort::Q: row.push_back(s(t[j], x)); break;
            case Sort::X: row.push_back(d.Hindex[idx(x)][idx(t[j])]); break;
            default: row.push_back(t[j]);
          }
        }
        st.tuples.push_back(std::move(row));
      }
    std::sort(st.tuples.begin(), st.tuples.end());
    st.tuples.erase(std::unique(st.tuples.begin(), st.tuples.end()), st.tuples.end());
    out.push_back(std::move(st));
  }
  return out;
}

std::vector<std::pair<int, int>> x_star(const DerivedStructure& d) {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < d.nX; ++x)
    for (std::size_t h = 0; h < d.H.size(); ++h)
      if (d.in_X(d.mu[h][idx(x)])) out.emplace_back(x, static_cast<int>(h));
  return out;
}

bool delta_star_holds(const FiniteInternality& s, const DerivedStructure& d,
                      const DeltaRelation& r, int x, const std::vector<int>& params) {
  if (params.size() != r.sorts.size()) return false;
  std::vector<int> t(params.size());
  for (std::size_t j = 0; j < params.size(); ++j) {
    switch (r.sorts[j]) {
      case Sort::Q: {
        if (params[j] < 0 || params[j] >= s.nC) return false;
        t[j] = d.g[idx(x)][idx(params[j])];
        if (t[j] < 0) return false;
        break;
      }
      case Sort::X: {
        if (params[j] < 0 || params[j] >= static_cast<int>(d.H.size())) return false;
        t[j] = d.mu[idx(params[j])][idx(x)];
        if (!d.in_X(t[j])) return false;
        break;
      }
      default: t[j] = params[j];
    }
  }
  return std::binary_search(r.tuples.begin(), r.tuples.end(), t);
}

bool preserves(const AutPair& p, const DeltaRelation& r) {
  for (const auto& t : r.tuples)
    if (!std::binary_search(r.tuples.begin(), r.tuples.end(), apply(p, r.sorts, t))) return false;
  return true;
}

std::vector<AutPair> group_delta(const FiniteInternality& s, const DerivedStructure& d,
                                 const std::vector<DeltaRelation>& delta) {
  auto g0 = group_intdef2(s, d);
  auto fib = star_fibers(s, delta_star(s, d, delta));
  std::vector<AutPair> out;
  for (const auto& p : g0) {
    bool ok = true;
    for (std::size_t r = 0; r < fib.size() && ok; ++r)
      for (int x = 0; x < s.nX && ok; ++x) ok = fib[r][idx(x)] == fib[r][idx(p.tauX[idx(x)])];
    if (ok) out.push_back(p);
  }
  if (!is_group(out)) throw std::logic_error("group_delta: result is not a group");
  return out;
}

std::vector<AutPair> brute_force_delta_group(const FiniteInternality& s,
                                             const std::vector<DeltaRelation>& delta, int max_size) {
  std::vector<AutPair> out;
  for (auto& p : brute_force_group(s, max_size)) {
    bool ok = true;
    for (const auto& r : delta) ok = ok && preserves(p, r);
    if (ok) out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::vector<int>> delta_type_classes(const FiniteInternality& s,
                                                 const DerivedStructure& d,
                                                 const std::vector<DeltaRelation>& delta) {
  auto fib = star_fibers(s, delta_star(s, d, delta));
  using Key = std::pair<std::vector<int>, std::vector<std::vector<std::vector<int>>>>;
  std::map<Key, std::vector<int>> classes;
  for (int x = 0; x < s.nX; ++x) {
    Key k;
    k.first.push_back(s.piX[idx(x)]);
    for (std::size_t h = 0; h < d.H.size(); ++h)
      if (d.in_X(d.mu[h][idx(x)])) k.first.push_back(static_cast<int>(h));
    for (const auto& r : fib) k.second.push_back(r[idx(x)]);
    classes[k].push_back(x);
  }
  std::vector<std::vector<int>> out;
  for (auto& [k, v] : classes) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

OrbitData orbits_and_groupoid(const FiniteInternality& s, const DerivedStructure& d,
                              const std::vector<DeltaRelation>& delta) {
  OrbitData o;
  o.group = group_delta(s, d, delta);
  o.t.assign(idx(s.nX), -1);
  for (int x = 0; x < s.nX; ++x) {
    if (o.t[idx(x)] >= 0) continue;
    std::set<int> orbit;
    for (const auto& p : o.group) orbit.insert(p.tauX[idx(x)]);
    for (int y : orbit) o.t[idx(y)] = static_cast<int>(o.E.size());
    o.E.emplace_back(orbit.begin(), orbit.end());
  }
  std::map<std::vector<int>, int> hpos;
  for (std::size_t h = 0; h < d.H.size(); ++h) hpos.emplace(d.H[h], static_cast<int>(h));
  std::size_t nE = o.E.size();
  o.He.assign(nE, std::vector<std::vector<int>>(nE));
  for (std::size_t e = 0; e < nE; ++e)
    for (std::size_t f = 0; f < nE; ++f) {
      std::set<int> hs;
      for (int a : o.E[e])
        for (int b : o.E[f]) hs.insert(d.Hindex[idx(a)][idx(b)]);
      o.He[e][f].assign(hs.begin(), hs.end());
    }
  std::size_t nH = d.H.size();
  o.compose.assign(nH, std::vector<int>(nH, -1));
  for (std::size_t h2 = 0; h2 < nH; ++h2)
    for (std::size_t h1 = 0; h1 < nH; ++h1) {
      if (d.Hcod[h1] != d.Hdom[h2]) continue;
      std::vector<int> c(idx(s.nC), -1);
      for (int x = 0; x < s.nC; ++x)
        if (d.H[h1][idx(x)] >= 0) c[idx(x)] = d.H[h2][idx(d.H[h1][idx(x)])];
      auto it = hpos.find(c);
      if (it != hpos.end()) o.compose[h2][h1] = it->second;
    }
  for (const auto& orbit : o.E) o.identity.push_back(d.Hindex[idx(orbit[0])][idx(orbit[0])]);
  for (std::size_t h = 0; h < nH; ++h) {
    std::vector<int> inv(idx(s.nC), -1);
    for (int c = 0; c < s.nC; ++c)
      if (d.H[h][idx(c)] >= 0) inv[idx(d.H[h][idx(c)])] = c;
    auto it = hpos.find(inv);
    o.inverse.push_back(it == hpos.end() ? -1 : it->second);
  }
  return o;
}

TorsorReport torsor_check(const std::vector<std::vector<int>>& mult,
                          const std::vector<std::vector<int>>& action) {
  auto fail = [](std::string m) { return TorsorReport{false, std::move(m)}; };
  std::size_t n = mult.size();
  if (n == 0 || action.size() != n) return fail("group and action sizes differ");
  std::size_t m = action[0].size();
  if (m == 0) return fail("the set has no point");
  int e = -1;
  for (std::size_t g = 0; g < n && e < 0; ++g) {
    bool id = true;
    for (std::size_t h = 0; h < n && id; ++h) id = mult[g][h] == static_cast<int>(h);
    if (id) e = static_cast<int>(g);
  }
  if (e < 0) return fail("no identity element");
  for (std::size_t x = 0; x < m; ++x)
    if (action[idx(e)][x] != static_cast<int>(x)) return fail("identity acts nontrivially");
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      for (std::size_t x = 0; x < m; ++x)
        if (action[idx(mult[g][h])][x] != action[g][idx(action[h][x])])
          return fail("action is not compatible with multiplication");
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t x = 0; x < m; ++x)
      if (static_cast<int>(g) != e && action[g][x] == static_cast<int>(x))
        return fail("not free: element " + std::to_string(g) + " fixes point " + std::to_string(x));
  std::set<int> orbit;
  for (std::size_t g = 0; g < n; ++g) orbit.insert(action[g][0]);
  if (orbit.size() != m) return fail("not transitive");
  // (g, x) -> (x, g x) is then injective, and onto X x X since |G| = |X|.
  if (n != m) return fail("(p2, m) is not a bijection onto X x X");
  return {};
}

TorsorReport groupoid_torsor_check(const FiniteInternality& s, const DerivedStructure& d,
                                   const OrbitData& o) {
  auto fail = [](std::string m) { return TorsorReport{false, std::move(m)}; };
  const auto& G = o.group;
  std::map<AutPair, int> gpos;
  for (std::size_t i = 0; i < G.size(); ++i) gpos.emplace(G[i], static_cast<int>(i));
  std::vector<std::vector<int>> mult(G.size(), std::vector<int>(G.size()));
  for (std::size_t a = 0; a < G.size(); ++a)
    for (std::size_t b = 0; b < G.size(); ++b) {
      auto it = gpos.find(compose(G[a], G[b]));
      if (it == gpos.end()) return fail("G_Delta is not closed under composition");
      mult[a][b] = it->second;
    }
  std::size_t nE = o.E.size();
  auto mu = [&](int h, int x) { return d.mu[idx(h)][idx(x)]; };
  for (std::size_t e = 0; e < nE; ++e) {
    const auto& Xe = o.E[e];
    std::map<int, int> local;
    for (std::size_t i = 0; i < Xe.size(); ++i) local[Xe[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> act(G.size(), std::vector<int>(Xe.size()));
    for (std::size_t g = 0; g < G.size(); ++g)
      for (std::size_t i = 0; i < Xe.size(); ++i) {
        auto it = local.find(G[g].tauX[idx(Xe[i])]);
        if (it == local.end()) return fail("G_Delta moves a point out of its orbit");
        act[g][i] = it->second;
      }
    auto rep = torsor_check(mult, act);
    if (!rep.ok) return fail("orbit " + std::to_string(e) + ": " + rep.message);
  }
  for (std::size_t e = 0; e < nE; ++e)
    for (std::size_t f = 0; f < nE; ++f) {
      const auto& Hef = o.He[e][f];
      std::string tag = "H_" + std::to_string(e) + "^" + std::to_string(f);
      if (Hef.size() != G.size()) return fail(tag + " has the wrong size");
      std::set<std::pair<int, int>> image;
      for (int h : Hef)
        for (int a : o.E[e]) {
          int b = mu(h, a);
          if (!d.in_X(b) || o.t[idx(b)] != static_cast<int>(f))
            return fail(tag + " does not map X_e into X_f");
          image.emplace(a, b);
          for (int q = 0; q < s.nQ; ++q)
            if (s(q, b) != d.H[idx(h)][idx(s(q, a))]) return fail("mu and f do not commute");
          for (const auto& tau : G)
            if (mu(h, tau.tauX[idx(a)]) != tau.tauX[idx(b)])
              return fail("the actions of H and G do not commute");
        }
      if (image.size() != o.E[e].size() * o.E[f].size())
        return fail(tag + ": (x, mu(h, x)) is not a bijection onto X_e x X_f");
      for (int h : Hef) {
        int inv = o.inverse[idx(h)];
        if (inv < 0 || !std::binary_search(o.He[f][e].begin(), o.He[f][e].end(), inv))
          return fail(tag + ": missing inverse");
        if (o.compose[idx(inv)][idx(h)] != o.identity[e]) return fail(tag + ": inverse law fails");
        if (o.compose[idx(h)][idx(o.identity[e])] != h || o.compose[idx(o.identity[f])][idx(h)] != h)
          return fail(tag + ": identity law fails");
      }
      for (std::size_t g = 0; g < nE; ++g)
        for (int h1 : Hef)
          for (int h2 : o.He[f][g]) {
            int c = o.compose[idx(h2)][idx(h1)];
            if (c < 0 || !std::binary_search(o.He[e][g].begin(), o.He[e][g].end(), c))
              return fail("composition leaves the groupoid");
            for (int a : o.E[e])
              if (mu(c, a) != mu(h2, mu(h1, a))) return fail("mu(m(h2, h1), x) != mu(h2, mu(h1, x))");
            for (std::size_t k = 0; k < nE; ++k)
              for (int h3 : o.He[g][k])
                if (o.compose[idx(h3)][idx(c)] != o.compose[idx(o.compose[idx(h3)][idx(h2)])][idx(h1)])
                  return fail("composition is not associative");
          }
    }
  for (std::size_t e = 0; e < nE; ++e) {
    if (mu(o.identity[e], o.E[e][0]) != o.E[e][0]) return fail("identity does not act trivially");
    const auto& Hee = o.He[e][e];
    for (int x : o.E[e]) {
      // g -> f_x o g o f_x^-1 as a C-map on the fiber of x.
      std::vector<int> iso(G.size());
      for (std::size_t i = 0; i < G.size(); ++i) {
        std::vector<int> c(idx(s.nC), -1);
        for (int q = 0; q < s.nQ; ++q) c[idx(s(q, x))] = s(G[i].tauQ[idx(q)], x);
        auto it = std::find(d.H.begin(), d.H.end(), c);
        if (it == d.H.end()) return fail("conjugate of a group element is not in H");
        iso[i] = static_cast<int>(it - d.H.begin());
        if (!std::binary_search(Hee.begin(), Hee.end(), iso[i])) return fail("conjugate is not in H_e^e");
      }
      if (std::set<int>(iso.begin(), iso.end()).size() != Hee.size())
        return fail("conjugation is not a bijection onto H_e^e");
      for (std::size_t a = 0; a < G.size(); ++a)
        for (std::size_t b = 0; b < G.size(); ++b)
          if (iso[idx(mult[a][b])] != o.compose[idx(iso[a])][idx(iso[b])])
            return fail("conjugation is not a homomorphism");
    }
  }
  return {};
}

std::vector<DeltaRelation> random_delta(std::mt19937_64& rng, const FiniteInternality& s,
                                        const std::vector<AutPair>& group, int count) {
  std::vector<DeltaRelation> out;
  int k = uniform_index(rng, count + 1);
  for (int i = 0; i < k; ++i) {
    DeltaRelation r;
    int arity = 1 + uniform_index(rng, 2);
    for (int j = 0; j < arity; ++j) r.sorts.push_back(static_cast<Sort>(uniform_index(rng, 3)));
    std::vector<int> cur(idx(arity), 0);
    // Enumerate all tuples and keep each with probability 1/3.
    for (;;) {
      if (uniform_index(rng, 3) == 0) r.tuples.push_back(cur);
      int j = arity - 1;
      while (j >= 0 && ++cur[idx(j)] == sort_size(s, r.sorts[idx(j)])) cur[idx(j--)] = 0;
      if (j < 0) break;
    }
    int mode = uniform_index(rng, 3);
    if (mode > 0 && !group.empty()) {
      std::vector<AutPair> gens;
      if (mode == 1)
        gens = group;
      else
        gens.push_back(group[idx(uniform_index(rng, static_cast<int>(group.size())))]);
      std::set<std::vector<int>> closed(r.tuples.begin(), r.tuples.end());
      std::vector<std::vector<int>> work(r.tuples.begin(), r.tuples.end());
      while (!work.empty()) {
        auto t = work.back();
        work.pop_back();
        for (const auto& g : gens) {
          auto u = apply(g, r.sorts, t);
          if (closed.insert(u).second) work.push_back(u);
        }
      }
      r.tuples.assign(closed.begin(), closed.end());
    }
    out.push_back(normalized(s, std::move(r)));
  }
  return out;
}

}  // namespace diffgal
