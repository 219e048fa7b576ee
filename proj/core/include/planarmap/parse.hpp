#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planarmap/polynomial.hpp"

namespace planarmap {

struct ParseError : std::runtime_error {
    ParseError(std::size_t position, std::string message, std::vector<std::string> expected);

    std::size_t position; // byte offset into the input
    std::string message;
    std::vector<std::string> expected;
};

// Grammar (whitespace insignificant, no implicit multiplication):
//   expr   := term (('+'|'-') term)*
//   term   := unary ('*' unary)*
//   unary  := ('-')* atom
//   atom   := ('x' | 'y' | rational | '(' expr ')') ('^' digits)?
//   rational := digits ('/' digits)?   with a nonzero denominator
// Exponents are nonnegative integers, so "-x^2" is -(x^2).
Polynomial parse(std::string_view text);

// Canonical text: graded-lex descending terms joined by " + ", explicit '*'
// and '^', unit coefficients elided, non-integer rationals as "a/b".
// format(parse("y + x - x^3")) == "-1*x^3 + x + y"; the zero polynomial is "0".
std::string format(const Polynomial& p);

// "<spaces>^" caret line for diagnostics pointing at `position`.
std::string caret_line(std::size_t position);

} // namespace planarmap
