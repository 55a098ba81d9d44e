#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace fourvertex {

/// Exact arithmetic used by every oracle path.
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "3", "-2", "0.25", "1/3", "1.5e-2". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical form: "10", "5/2", "-1/3".
std::string to_string(const Rational& q);

/// q^k for any integer k; q must be nonzero when k < 0.
Rational pow(const Rational& q, long k);

/// Natural log of a positive rational, accurate for values far outside double range.
double log(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace fourvertex
