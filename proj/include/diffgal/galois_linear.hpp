#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "diffgal/difference_field.hpp"
#include "diffgal/matrix.hpp"
#include "diffgal/polynomial.hpp"

namespace diffgal {

// sigma(y) = A y over a difference field. The matrix indeterminates X are
// named x (n = 1), x y z w (n = 2, row-major) or x11..xnn, unless overridden.
class LinearDifferenceSystem {
 public:
  LinearDifferenceSystem(DifferenceFieldSpec field, MatrixRF A,
                         std::vector<std::string> entries = {});

  const DifferenceFieldSpec& field() const { return field_; }
  std::size_t n() const { return A_.rows(); }
  const MatrixRF& A() const { return A_; }
  const RationalFunction& det_A() const { return det_A_; }
  const std::vector<std::string>& entries() const { return entries_; }
  const std::string& entry(std::size_t i, std::size_t j) const { return entries_[i * n() + j]; }
  // The generic matrix of indeterminates and its determinant.
  MatrixRF X() const;
  Polynomial det_X() const { return det_X_; }
  // Field symbols plus the entry names.
  std::set<std::string> symbols() const;

  static std::vector<std::string> default_entries(std::size_t n);
  static std::vector<std::string> group_variables(std::size_t n);  // g11..gnn

 private:
  DifferenceFieldSpec field_;
  MatrixRF A_;
  RationalFunction det_A_;
  std::vector<std::string> entries_;
  Polynomial det_X_;
};

// h(X) = p(X) / det(X)^k.
struct Invariant {
  Polynomial p;
  unsigned k = 0;
  RationalFunction as_function(const LinearDifferenceSystem& sys) const;
  std::string str() const;
  friend bool operator==(const Invariant&, const Invariant&) = default;
};

// True iff sigma(g) = A g A^-1 entrywise. DomainError for singular g.
bool sigma_conjugation_check(const LinearDifferenceSystem& sys, const MatrixRF& g);

// sigma on k[X, 1/det X]: sigma on coefficients, then X -> A X.
RationalFunction pv_sigma(const LinearDifferenceSystem& sys, const RationalFunction& h);
RationalFunction pv_sigma_inverse(const LinearDifferenceSystem& sys, const RationalFunction& h);

bool verify_invariant(const LinearDifferenceSystem& sys, const Invariant& inv);

struct CharacterLattice {
  std::size_t n = 0;
  IntMatrix basis;  // n x r, columns in canonical Hermite form
  std::vector<std::vector<Integer>> vectors() const;
  bool contains(const std::vector<Integer>& m) const;
};

// {m in Z^n : prod values_i^m_i = 1}. DomainError on a zero value.
CharacterLattice multiplicative_lattice(const std::vector<Rational>& values);
// prod values_i^m_i == 1, evaluated exactly.
bool is_relation(const std::vector<Rational>& values, const std::vector<Integer>& m);

struct GaGroup {
  MatrixQ P;                          // columns are eigenvectors
  std::vector<Rational> eigenvalues;  // P^-1 A P = diag(eigenvalues)
  CharacterLattice lattice;
  std::vector<Polynomial> centralizer;  // entries of g A - A g in g11..gnn
  bool equality = false;                // the base is all constants
};

// Unsupported unless A has rational entries and is diagonalizable over Q.
GaGroup ga_group(const LinearDifferenceSystem& sys);
// Membership of a rational matrix in P T_L P^-1.
bool ga_contains(const GaGroup& g, const MatrixQ& m);

struct SearchBounds {
  unsigned d = 4, k_max = 2, m = 4;
  std::size_t max_basis = 20000;
};

struct InvariantSearchResult {
  SearchBounds bounds;
  std::vector<Invariant> invariants;  // ordered by (k, degree)
};

// Homogeneous p of each degree <= d with coefficients in Q[t]_{<= m} over
// Q(params) and p^sigma(A X) = det(A)^k p(X). GuardExceeded when a basis
// exceeds max_basis.
InvariantSearchResult invariant_search(const LinearDifferenceSystem& sys, const SearchBounds& b);

// h(g X) = h(X) for every invariant. DomainError for singular g.
bool stabilizer_check(const LinearDifferenceSystem& sys, const std::vector<Invariant>& invs,
                      const MatrixRF& g);

struct GroupPresentation {
  std::vector<std::string> sigma_equations;  // sigma(gij) = (A g A^-1)ij
  std::vector<Invariant> invariants;
  std::vector<Polynomial> equations;         // in g11..gnn, each "= 0"
  std::optional<CharacterLattice> lattice;
  std::vector<std::string> lines() const;
};

GroupPresentation emit_group_equations(const LinearDifferenceSystem& sys,
                                       const std::vector<Invariant>& invs);
bool satisfies(const GroupPresentation& pres, const MatrixRF& g);

struct TorsorMembership {
  bool member = false;
  std::string method;         // "right-invariant", "explicit-2x2"
  unsigned samples = 0;       // fiber points checked directly
  unsigned disagreements = 0;
};

// Whether F(X g^-1) = e on the fiber F(X) = e. The explicit path handles the
// 2x2 family F = (z^2, zw, w^2)/det^2, cross-checked on sampled fiber points;
// otherwise only g with F(X g^-1) = F(X) identically are decided.
TorsorMembership torsor_family_membership(const LinearDifferenceSystem& sys,
                                          const std::vector<Invariant>& F,
                                          const std::vector<RationalFunction>& e,
                                          const MatrixRF& g, std::mt19937_64& rng,
                                          unsigned samples = 20);
// True iff invs are z^2, zw, w^2 over det^2 in the entries of a 2x2 system.
bool is_quadratic_row_family(const LinearDifferenceSystem& sys, const std::vector<Invariant>& F);
// A point X with F(X) = e for the 2x2 family, when e has rational square roots.
std::optional<MatrixQ> sample_fiber_point(const std::vector<Rational>& e, std::mt19937_64& rng);

struct StabilityReport {
  bool ok = true;
  std::vector<Polynomial> generators;  // p_i - c_i det(X)^k_i
  std::vector<Polynomial> images;      // numerators of the sigma-images
  int failing = -1;
  std::string witness;
};

// sigma(h_i - c_i) = h_i - c_i for every generator. DomainError for a
// non-constant c_i or a size mismatch.
StabilityReport difference_ideal_stability(const LinearDifferenceSystem& sys,
                                           const std::vector<Invariant>& invs,
                                           const std::vector<RationalFunction>& c);

}  // namespace diffgal
