#pragma once

#include <string>

#include "neron/polynomial.hpp"
#include "neron/series.hpp"

namespace neron {

// Parse a polynomial over the given table.
//   expr := term (('+'|'-') term)*
//   term := factor ('*' factor)*
//   factor := atom ('^' posint)?
//   atom := rational | identifier | '(' expr ')'
// Unary minus is allowed in front of a term. Identifiers must name table
// variables. Errors carry line/column positions.
Polynomial parse_polynomial(const std::string& text, const VarTablePtr& table,
                            MonomialOrder order = MonomialOrder::degrevlex());

// Evaluate a series expression modulo x^N.
//   atom := rational | 'x' | '(' expr ')' | 'inv(' expr ')' | 'sqrt(' expr ')'
//         | 'EXP' | 'FACT'
// with the same term/factor/power structure as polynomials.
TruncatedSeries eval_series_expr(const std::string& text, std::size_t precision);

} // namespace neron
