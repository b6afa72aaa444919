#include <algorithm>
#include <random>
#include <set>

#include "diffgal/errors.hpp"
#include "diffgal/internality.hpp"
#include "doctest.h"

using namespace diffgal;

namespace {

std::set<AutPair> as_set(const std::vector<AutPair>& g) { return {g.begin(), g.end()}; }

FiniteInternality singleton_structure() {
  return FiniteInternality::make(1, 1, {0}, {{0}});
}

// Independent count of translation pairs for Z_n: tauQ(q) = q + a, tauX(x) = x - a.
std::set<AutPair> cyclic_translations(int n) {
  std::set<AutPair> out;
  for (int a = 0; a < n; ++a) {
    AutPair p{Perm(n), Perm(n)};
    for (int i = 0; i < n; ++i) {
      p.tauQ[i] = (i + a) % n;
      p.tauX[i] = (i - a + n) % n;
    }
    out.insert(p);
  }
  return out;
}

void check_all_groups_agree(const FiniteInternality& s) {
  auto d = derive(s);
  auto brute = as_set(brute_force_group(s));
  auto g1 = group_intdef1(s, d);
  auto g2 = group_intdef2(s, d);
  auto gh = group_horrible(s);
  CHECK(as_set(g1) == brute);
  CHECK(as_set(g2) == brute);
  CHECK(as_set(gh.group) == brute);
  CHECK(is_group(g1));
  for (const auto& p : g1) CHECK(is_autpair(s, p));
}

}  // namespace

TEST_CASE("validate examples") {
  CHECK(validate(cyclic_structure(3)).ok);
  std::vector<std::vector<int>> mul(3, std::vector<int>(3));
  for (int x = 0; x < 3; ++x)
    for (int q = 0; q < 3; ++q) mul[x][q] = q * x % 3;
  auto bad = validate(FiniteInternality::make(3, 1, {0, 0, 0}, mul));
  CHECK_FALSE(bad.ok);
  CHECK(bad.kind == "injective");
  CHECK(bad.witness.at(0) == 0);
  CHECK(validate(s3_structure()).ok);

  auto dup = FiniteInternality::make(2, 1, {0, 0}, {{0, 1}, {0, 1}});
  CHECK(validate(dup).kind == "distinct");
  auto off = FiniteInternality::make(2, 2, {0, 1}, {{0, 1}, {0, 1}});
  CHECK(validate(off).kind == "fiber");
}

TEST_CASE("derive examples") {
  auto s = cyclic_structure(3);
  auto d = derive(s);
  CHECK(d.F.size() == 3);
  CHECK(d.H.size() == 3);
  CHECK(d.Xbar.size() == 3);
  auto one = derive(singleton_structure());
  CHECK(one.F.size() == 1);
  CHECK(derive(s3_structure()).F.size() == 6);

  // Pi(x, y) = g_y o f_x and H(x, y) = f_y o f_x^-1.
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      const auto& u = d.F[d.Pi[x][y]];
      for (int q = 0; q < 3; ++q) {
        CHECK(s(u[q], y) == s(q, x));
        CHECK(d.H[d.Hindex[x][y]][s(q, x)] == s(q, y));
      }
    }
  for (int x = 0; x < 3; ++x) CHECK(d.Xbar[x] == s.f[x]);
}

TEST_CASE("formula groups on fixtures") {
  for (int n : {3, 4}) {
    auto s = cyclic_structure(n);
    auto d = derive(s);
    CHECK(as_set(group_intdef1(s, d)) == cyclic_translations(n));
    check_all_groups_agree(s);
  }
  auto one = singleton_structure();
  auto d1 = derive(one);
  CHECK(group_intdef1(one, d1).size() == 1);
  check_all_groups_agree(one);

  auto s3 = s3_structure();
  auto d = derive(s3);
  auto g = group_intdef1(s3, d);
  REQUIRE(g.size() == 6);
  // Each element acts on Q by q -> q g^-1 and on X by x -> g x.
  std::set<AutPair> expected;
  for (int h = 0; h < 6; ++h) {
    AutPair p{Perm(6), Perm(6)};
    for (int i = 0; i < 6; ++i) {
      p.tauQ[i] = s3_mul(i, s3_inv(h));
      p.tauX[i] = s3_mul(h, i);
    }
    expected.insert(p);
  }
  CHECK(as_set(g) == expected);
  check_all_groups_agree(s3);
}

TEST_CASE("brute force examples and guard") {
  CHECK(brute_force_group(cyclic_structure(3)).size() == 3);
  CHECK(brute_force_group(s3_structure()).size() == 6);
  CHECK(brute_force_group(singleton_structure()).size() == 1);
  auto two_x = FiniteInternality::make(3, 1, {0}, {{2, 0, 1}});
  CHECK(brute_force_group(two_x).size() == 1);
  CHECK_THROWS_AS(brute_force_group(cyclic_structure(7)), GuardExceeded);
  CHECK_THROWS_AS(check_formula_guard(cyclic_structure(13)), GuardExceeded);
}

TEST_CASE("delta_star examples") {
  auto s = cyclic_structure(3);
  auto d = derive(s);
  DeltaRelation eq{{Sort::Q, Sort::Q}, {{0, 0}, {1, 1}, {2, 2}}};
  auto st = delta_star(s, d, {eq});
  REQUIRE(st.size() == 1);
  for (const auto& t : st[0].tuples) CHECK(t[1] == t[2]);
  CHECK(st[0].tuples.size() == 9);

  DeltaRelation single{{Sort::Q}, {{1}}};
  auto ss = delta_star(s, d, {single})[0];
  for (int x = 0; x < 3; ++x)
    for (int c = 0; c < 3; ++c) {
      bool in = std::binary_search(ss.tuples.begin(), ss.tuples.end(), std::vector<int>{x, c});
      CHECK(in == (d.g[x][c] == 1));
      CHECK(in == delta_star_holds(s, d, single, x, {c}));
    }
  // X* is "mu(h, x) in X"; every (x, h) qualifies when H acts inside X.
  CHECK(x_star(d).size() == 9);
}

TEST_CASE("group_delta examples") {
  auto s4 = cyclic_structure(4);
  auto d4 = derive(s4);
  CHECK(as_set(group_delta(s4, d4, {})) == as_set(group_intdef2(s4, d4)));
  DeltaRelation even = normalized(s4, {{Sort::Q}, {{2}, {0}}});
  auto g = group_delta(s4, d4, {even});
  REQUIRE(g.size() == 2);
  std::set<int> shifts;
  for (const auto& p : g) shifts.insert(p.tauQ[0]);
  CHECK(shifts == std::set<int>{0, 2});
  CHECK(as_set(g) == as_set(brute_force_delta_group(s4, {even})));

  auto s3 = s3_structure();
  auto d3 = derive(s3);
  DeltaRelation graph{{Sort::Q, Sort::Q, Sort::Q}, {}};
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) graph.tuples.push_back({a, b, s3_mul(a, b)});
  graph = normalized(s3, graph);
  auto gd = group_delta(s3, d3, {graph});
  CHECK(as_set(gd) == as_set(brute_force_delta_group(s3, {graph})));
  // Right translations preserve the graph only for g = e.
  CHECK(gd.size() == 1);

  CHECK_THROWS_AS(normalized(s4, {{Sort::Q}, {{4}}}), DomainError);
  CHECK_THROWS_AS(normalized(s4, {{Sort::Q}, {{1, 2}}}), DomainError);
}

TEST_CASE("orbits and groupoid examples") {
  auto s = cyclic_structure(3);
  auto d = derive(s);
  auto o = orbits_and_groupoid(s, d, {});
  CHECK(o.E.size() == 1);
  CHECK(o.He[0][0].size() == 3);
  CHECK(groupoid_torsor_check(s, d, o).ok);

  // A Delta cutting the group down to the identity leaves singleton orbits.
  DeltaRelation pin{{Sort::X}, {{0}}};
  pin = normalized(s, pin);
  auto o1 = orbits_and_groupoid(s, d, {pin});
  CHECK(o1.group.size() == 1);
  CHECK(o1.E.size() == 3);
  for (const auto& row : o1.He)
    for (const auto& hs : row) CHECK(hs.size() == 1);
  CHECK(groupoid_torsor_check(s, d, o1).ok);

  auto s3 = s3_structure();
  auto d3 = derive(s3);
  auto o3 = orbits_and_groupoid(s3, d3, {});
  CHECK(o3.E.size() == 1);
  CHECK(o3.He[0][0].size() == 6);
  CHECK(groupoid_torsor_check(s3, d3, o3).ok);
}

TEST_CASE("torsor_check examples") {
  std::vector<std::vector<int>> z2{{0, 1}, {1, 0}};
  CHECK(torsor_check(z2, {{0, 1}, {1, 0}}).ok);
  auto trivial = torsor_check(z2, {{0, 1}, {0, 1}});
  CHECK_FALSE(trivial.ok);
  CHECK(trivial.message.find("not free") != std::string::npos);
  auto one{std::vector<std::vector<int>>{{0}}};
  CHECK_FALSE(torsor_check(one, {{0, 1}}).ok);
}

TEST_CASE("canonical_family examples") {
  std::vector<std::vector<bool>> same(3, std::vector<bool>{true, false});
  CHECK(canonical_family(same).representative.size() == 1);
  std::vector<std::vector<bool>> id(3, std::vector<bool>(3));
  for (int i = 0; i < 3; ++i) id[i][i] = true;
  CHECK(canonical_family(id).representative.size() == 3);
  std::vector<std::vector<bool>> parity(4, std::vector<bool>(4));
  for (int p = 0; p < 4; ++p)
    for (int y = 0; y < 4; ++y) parity[p][y] = (y - p) % 2 == 0;
  auto cf = canonical_family(parity);
  CHECK(cf.representative == std::vector<int>{0, 1});
  CHECK(cf.class_of == std::vector<int>{0, 1, 0, 1});
  for (int p = 0; p < 4; ++p) CHECK(cf.psi[cf.class_of[p]] == parity[p]);
}

TEST_CASE("random_structure is deterministic and valid") {
  StructureBounds b{3, 1, 4, false};
  auto a = random_structure(1, b), c = random_structure(1, b);
  CHECK(validate(a).ok);
  CHECK(a.f == c.f);
  CHECK(a.piX == c.piX);
  CHECK_THROWS_AS(random_structure(1, {2, 1, 3, false}), DomainError);
  CHECK_THROWS_AS(random_structure(1, {2, 3, 2, false}), DomainError);
}

TEST_CASE("random structures: formula groups, mu and nu properties") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 40; ++it) {
    auto b = random_bounds(rng, 4, 2, 5);
    auto s = random_structure(rng(), b);
    REQUIRE(validate(s).ok);
    check_all_groups_agree(s);
    auto d = derive(s);
    for (int x = 0; x < s.nX; ++x)
      for (std::size_t h = 0; h < d.H.size(); ++h) {
        int m = d.mu[h][x];
        if (!d.in_X(m)) continue;
        for (int q = 0; q < s.nQ; ++q) CHECK(s(q, m) == d.H[h][s(q, x)]);
        for (std::size_t u = 0; u < d.F.size(); ++u) {
          int vx = d.nu[u][x];
          int lhs = d.nu[u][m];
          int rhs = vx >= 0 ? d.mu[h][vx] : -2;
          if (d.in_X(vx)) CHECK(lhs == rhs);
        }
      }
  }
}

TEST_CASE("random structures: delta groups, orbits and torsors") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 25; ++it) {
    auto b = random_bounds(rng, 4, 2, 5);
    b.symmetric = it % 2 == 0;
    auto s = random_structure(rng(), b);
    auto d = derive(s);
    auto g0 = group_intdef2(s, d);
    auto delta = random_delta(rng, s, g0, 3);
    auto gd = group_delta(s, d, delta);
    CHECK(as_set(gd) == as_set(brute_force_delta_group(s, delta)));
    for (const auto& p : gd) CHECK(std::find(g0.begin(), g0.end(), p) != g0.end());
    auto o = orbits_and_groupoid(s, d, delta);
    CHECK(o.E == delta_type_classes(s, d, delta));
    auto rep = groupoid_torsor_check(s, d, o);
    CHECK_MESSAGE(rep.ok, rep.message);
  }
}
