#pragma once

// Small helpers on top of gmpxx: exact integer sqrt, perfect-square tests,
// rational powers, and strict parsing of integers / fractions from text.

#include <gmpxx.h>

#include <optional>
#include <string>

namespace cflab {

// Floor of sqrt(n) for n >= 0.  Throws for negative n.
mpz_class isqrt(const mpz_class& n);

bool is_perfect_square(const mpz_class& n);

// If q = s^2 for rational s >= 0, returns s.
std::optional<mpq_class> rational_sqrt(const mpq_class& q);

// base^e for integer e (negative e inverts; base must be nonzero then).
mpq_class pow_q(const mpq_class& base, long e);
mpz_class pow_z(const mpz_class& base, unsigned long e);

// Strict parsers: the whole string must be consumed.  "12", "-3", "5/8",
// "-7/9".  Denominator must be positive and nonzero in the text.
mpz_class parse_int(const std::string& text);
mpq_class parse_rational(const std::string& text);

// Canonical text form "p" or "p/q" (q > 1), matching what parse accepts.
std::string to_string(const mpq_class& q);
std::string to_string(const mpz_class& z);

} // namespace cflab
