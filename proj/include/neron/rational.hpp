#pragma once

#include <gmpxx.h>

#include <string>

#include "neron/error.hpp"

namespace neron {

// Exact rational scalar. mpq_class keeps gcd(num, den) = 1 and den > 0
// after canonicalize(), which every constructor below guarantees.
using Rat = mpq_class;

inline Rat rat_of(long num, long den = 1) {
    if (den == 0) fail(ErrorKind::Validation, "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q".
inline Rat rat_parse(const std::string& text) {
    Rat r;
    if (r.set_str(text, 10) != 0)
        fail(ErrorKind::ParseError, "bad rational literal: " + text);
    if (r.get_den() == 0)
        fail(ErrorKind::ParseError, "rational with zero denominator: " + text);
    r.canonicalize();
    return r;
}

// "p/q", q omitted when 1.
inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool rat_is_zero(const Rat& r) { return sgn(r) == 0; }

} // namespace neron
