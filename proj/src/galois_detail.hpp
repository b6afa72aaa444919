#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "diffgal/galois_linear.hpp"

namespace diffgal::detail {

Polynomial poly_lcm(const Polynomial& a, const Polynomial& b);
// sigma^k on the coefficients of p (t moves, entries stay).
Polynomial sigma_coeffs(const LinearDifferenceSystem& sys, const Polynomial& p, long k);
// Homogeneous components with respect to `vars`.
std::map<unsigned, Polynomial> split_by_degree(const Polynomial& p, const std::set<std::string>& vars);
// Coefficients of p as a polynomial in `keys`, keyed by their exponents.
std::map<Exponents, Polynomial> split_by_keys(const Polynomial& p, const std::vector<std::string>& keys);
// p(M X) when left, p(X M) otherwise.
RationalFunction linear_substitute(const LinearDifferenceSystem& sys, const Polynomial& p,
                                   const MatrixRF& M, bool left);
RationalFunction det_rf(const MatrixRF& m);
void require_invertible(const MatrixRF& g);

}  // namespace diffgal::detail
