#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace tflag {

using Rational = mpq_class;

/// Parses "p", "p/q" or "-p/q". Throws SchemaError on malformed input or q = 0.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers print without a denominator.
std::string to_string(const Rational& value);

/// Binomial coefficient as an exact integer.
mpz_class binomial(long n, long k);

/// Falling factorial n (n-1) ... (n-k+1).
mpz_class falling_factorial(long n, long k);

}  // namespace tflag
