#pragma once

#include <set>
#include <string>
#include <string_view>

#include "diffgal/matrix.hpp"
#include "diffgal/rational_function.hpp"

namespace diffgal {

// Grammar: integers, p/q, declared symbols, + - * / ^ (integer exponents,
// possibly negative), unary minus and parentheses. Undeclared symbols are
// rejected with ParseError.
RationalFunction parse_expr(std::string_view text, const std::set<std::string>& symbols);

// Bracketed row list such as "[[-1,a],[0,b]]".
MatrixRF parse_matrix(std::string_view text, const std::set<std::string>& symbols);

}  // namespace diffgal
