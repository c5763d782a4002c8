#pragma once

#include <string>
#include <string_view>

#include <milnorkit/polynomial.hpp>
#include <milnorkit/series.hpp>

namespace milnorkit
{

// Grammar, lowest precedence first:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*      divisor must be a nonzero constant
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | identifier | '(' expr ')'
// Juxtaposition ("2x", "x y") is rejected.
Polynomial parse_polynomial(std::string_view text, const ContextPtr &ctx);

// Graded-lex descending, e.g. "3/2*x^2*y - x + 1"; "0" for zero.
std::string format_polynomial(const Polynomial &f);

// A univariate polynomial in `param`, read as a series truncated at `order`.
Series parse_series(std::string_view text, const std::string &param, int order);

} // namespace milnorkit
