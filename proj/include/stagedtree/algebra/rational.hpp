#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace staged::algebra {

// mpq_class keeps values canonical (lowest terms, positive denominator)
// as long as every constructor from raw parts calls canonicalize().
using Rational = mpq_class;

std::string to_string(const Rational& q);

/// Accepts "a", "-a", "a/b". Throws std::invalid_argument on bad input or a
/// zero denominator.
Rational parse_rational(std::string_view text);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

}  // namespace staged::algebra
