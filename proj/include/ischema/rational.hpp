#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace ischema {

using Rational = mpq_class;

// Accepts "4", "-4.5", "1/3", "-0.125". Returns nullopt on malformed input
// or a zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

// Exact decimal when the reduced denominator has only the prime factors 2 and
// 5, otherwise "p/q". Canonical: equal values always print identically.
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

// Exact square root of a non-negative rational when both reduced numerator and
// denominator are perfect squares.
std::optional<Rational> exact_sqrt(const Rational& value);

}  // namespace ischema
