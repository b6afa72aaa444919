#pragma once

#include <random>
#include <set>
#include <string>

#include "diffgal/expr.hpp"
#include "diffgal/rational_function.hpp"

namespace testing_helpers {

using namespace diffgal;

inline RationalFunction P(const std::string& s, std::set<std::string> syms = {"t", "a", "b"}) {
  return parse_expr(s, syms);
}

inline Rational rand_q(std::mt19937_64& g, int span = 5) {
  std::uniform_int_distribution<int> num(-span, span), den(1, 3);
  Rational q(num(g), den(g));
  q.canonicalize();
  return q;
}

// Small random polynomial in the given variables, total degree <= deg.
inline Polynomial rand_poly(std::mt19937_64& g, const std::vector<std::string>& vars, unsigned deg,
                            int terms = 3) {
  std::uniform_int_distribution<unsigned> d(0, deg);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  Polynomial p;
  for (int i = 0; i < terms; ++i) {
    Polynomial m = Polynomial(rand_q(g));
    unsigned k = d(g);
    for (unsigned j = 0; j < k; ++j) m *= Polynomial::var(vars[pick(g)]);
    p += m;
  }
  return p;
}

inline RationalFunction rand_rf(std::mt19937_64& g, const std::vector<std::string>& vars,
                                unsigned deg = 2) {
  Polynomial den;
  while (den.is_zero()) den = rand_poly(g, vars, deg, 2);
  return RationalFunction(rand_poly(g, vars, deg), den);
}

}  // namespace testing_helpers
