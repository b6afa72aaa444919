#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace diffgal {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(const Integer& z) { return sgn(z) == 0; }

// Accepts "p" or "p/q" with optional sign; throws ParseError otherwise.
Rational parse_rational(std::string_view s);
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

// Floor division and the matching nonnegative remainder for b != 0.
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);

// q^e for integer e, q != 0 when e < 0.
Rational pow(const Rational& q, long e);

}  // namespace diffgal
