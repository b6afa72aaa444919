#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace diffgal {

using Perm = std::vector<int>;

// Finite internality datum f : Q x X -> C over D. C is laid out in fiber
// blocks: c belongs to fiber c / nQ.
struct FiniteInternality {
  int nQ = 0, nX = 0, nC = 0, nD = 0;
  std::vector<int> piX;               // X -> D
  std::vector<int> piC;               // C -> D
  std::vector<std::vector<int>> f;    // f[x][q]

  // Builds nC = nQ * nD and piC from the fiber blocks. No validation.
  static FiniteInternality make(int nQ, int nD, std::vector<int> piX,
                                std::vector<std::vector<int>> f);
  int operator()(int q, int x) const { return f[static_cast<std::size_t>(x)][static_cast<std::size_t>(q)]; }
};

struct ValidationReport {
  bool ok = true;
  std::string kind;     // "shape", "fiber", "injective", "distinct"
  std::string message;
  std::vector<int> witness;
};

ValidationReport validate(const FiniteInternality& s);

// Quotient of P by equality of fibers {y : phi(p, y)}, with minimal-index
// representatives in order of first occurrence.
struct CanonicalFamily {
  std::vector<int> class_of;              // P -> Z
  std::vector<int> representative;        // Z -> P
  std::vector<std::vector<bool>> psi;     // psi[z][y]
};

CanonicalFamily canonical_family(const std::vector<std::vector<bool>>& phi);

struct DerivedStructure {
  std::vector<Perm> F;                     // bijections of Q
  std::vector<int> Finv;                   // index of the inverse in F
  std::vector<std::vector<int>> Pi;        // Pi[x][y] = index of g_y o f_x, -1 across fibers
  std::vector<std::vector<int>> g;         // g[x][c] = q with f(q,x) = c, -1 off the fiber
  std::vector<std::vector<int>> H;         // partial maps of C, -1 off the domain fiber
  std::vector<int> Hdom, Hcod;             // domain and codomain fibers
  std::vector<std::vector<int>> Hindex;    // Hindex[x][y] = class of f_y o f_x^-1
  std::vector<std::vector<int>> Xbar;      // functions Q -> C; the first nX are f_x
  std::vector<std::vector<int>> mu;        // mu[h][x], -1 when dom(h) != pi(x)
  std::vector<std::vector<int>> nu;        // nu[u][z] = f_z o u^-1
  int nX = 0;
  bool in_X(int xbar) const { return xbar >= 0 && xbar < nX; }
};

DerivedStructure derive(const FiniteInternality& s);

struct AutPair {
  Perm tauQ, tauX;
  friend bool operator==(const AutPair&, const AutPair&) = default;
  friend auto operator<=>(const AutPair&, const AutPair&) = default;
};

AutPair compose(const AutPair& a, const AutPair& b);  // a after b
AutPair inverse(const AutPair& a);
bool is_autpair(const FiniteInternality& s, const AutPair& p);
// Contains the identity and is closed under composition and inverses.
bool is_group(const std::vector<AutPair>& g);

// The pair (u, x -> nu(u, x)) for u in F; requires nu(u, .) to stay in X.
AutPair action_of(const DerivedStructure& d, int u);

std::vector<AutPair> group_intdef1(const FiniteInternality& s, const DerivedStructure& d);
std::vector<AutPair> group_intdef2(const FiniteInternality& s, const DerivedStructure& d);

struct HorribleResult {
  std::vector<std::pair<int, int>> pairs;  // (z, w) satisfying the relational formula
  std::vector<AutPair> group;              // induced actions, one per class
};

// Uses f only as the ternary relation f(q, x, c).
HorribleResult group_horrible(const FiniteInternality& s);

// Exhaustive search over permutation pairs; GuardExceeded beyond max_size.
std::vector<AutPair> brute_force_group(const FiniteInternality& s, int max_size = 6);

// Size guard for the formula groups.
void check_formula_guard(const FiniteInternality& s, int max_size = 12);

// ---------------------------------------------------------------------------
// Partial automorphisms.

enum class Sort { Q, X, C };

struct DeltaRelation {
  std::vector<Sort> sorts;
  std::vector<std::vector<int>> tuples;  // sorted, duplicate-free
};

// Throws DomainError on arity or range violations; sorts and dedups tuples.
DeltaRelation normalized(const FiniteInternality& s, DeltaRelation r);

// Rewritten relation in one X variable: tuples (x, p_1, ..., p_k) where a Q
// slot carries c = f(q, x), an X slot carries the H class of (x, z), and a C
// slot is unchanged.
struct DeltaStar {
  std::vector<Sort> sorts;  // original signature
  std::vector<std::vector<int>> tuples;
};

std::vector<DeltaStar> delta_star(const FiniteInternality& s, const DerivedStructure& d,
                                  const std::vector<DeltaRelation>& delta);
// X*: pairs (x, h) with mu(h, x) in X.
std::vector<std::pair<int, int>> x_star(const DerivedStructure& d);
// Direct evaluation of phi*(x, params) through g and mu.
bool delta_star_holds(const FiniteInternality& s, const DerivedStructure& d,
                      const DeltaRelation& r, int x, const std::vector<int>& params);

bool preserves(const AutPair& p, const DeltaRelation& r);
std::vector<AutPair> group_delta(const FiniteInternality& s, const DerivedStructure& d,
                                 const std::vector<DeltaRelation>& delta);
std::vector<AutPair> brute_force_delta_group(const FiniteInternality& s,
                                             const std::vector<DeltaRelation>& delta,
                                             int max_size = 6);
// Classes of X under equality of Delta*-types over C, H and D.
std::vector<std::vector<int>> delta_type_classes(const FiniteInternality& s,
                                                 const DerivedStructure& d,
                                                 const std::vector<DeltaRelation>& delta);

// ---------------------------------------------------------------------------
// Orbits and the opposite groupoid.

struct OrbitData {
  std::vector<AutPair> group;                 // G_Delta
  std::vector<std::vector<int>> E;            // orbits, each sorted, ordered by minimum
  std::vector<int> t;                         // X -> E
  std::vector<std::vector<std::vector<int>>> He;  // He[e][f]: sorted H indices
  // compose(h2, h1) = h2 o h1 as an H index, -1 when codomain and domain differ.
  std::vector<std::vector<int>> compose;
  std::vector<int> identity;                  // per orbit
  std::vector<int> inverse;                   // per H element
};

OrbitData orbits_and_groupoid(const FiniteInternality& s, const DerivedStructure& d,
                              const std::vector<DeltaRelation>& delta);

struct TorsorReport {
  bool ok = true;
  std::string message;
};

// Group given by a multiplication table on 0..n-1 acting on 0..m-1.
TorsorReport torsor_check(const std::vector<std::vector<int>>& mult,
                          const std::vector<std::vector<int>>& action);
// Group action, groupoid axioms, groupoid torsor diagrams, the vertex group
// isomorphism and commutation of the two actions, for every orbit.
TorsorReport groupoid_torsor_check(const FiniteInternality& s, const DerivedStructure& d,
                                   const OrbitData& o);

// ---------------------------------------------------------------------------
// Random structures.

struct StructureBounds {
  int nQ = 3, nD = 1, nX = 4;
  bool symmetric = false;  // close X under a random cyclic group of Q-permutations; whole orbits only, so nX may come out smaller
};

// Uniform integer in [0, n) from a 64-bit engine, independent of the library.
int uniform_index(std::mt19937_64& rng, int n);
FiniteInternality random_structure(std::uint64_t seed, const StructureBounds& b);
// Bounds with nQ <= maxQ, nD <= maxD, nX <= maxX, satisfiable.
StructureBounds random_bounds(std::mt19937_64& rng, int maxQ, int maxD, int maxX);
// Up to `count` random relations; some are closed under a random subgroup of `group`.
std::vector<DeltaRelation> random_delta(std::mt19937_64& rng, const FiniteInternality& s,
                                        const std::vector<AutPair>& group, int count);

// Fixtures.
FiniteInternality cyclic_structure(int n);  // Q = X = C = Z_n, f(q, x) = q + x
FiniteInternality s3_structure();           // Q = X = C = S_3, f = product
std::vector<Perm> s3_elements();            // index -> permutation of {0,1,2}
int s3_mul(int a, int b);
int s3_inv(int a);

}  // namespace diffgal
