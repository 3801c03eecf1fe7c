#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace disco {

/// Exact probability arithmetic. Every probability in the discrete engine
/// is carried as an arbitrary-precision rational so that identities such as
/// layer-3 factorization can be checked with zero tolerance.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Parses "3", "-0.25", "1e-3", "2.5E2" or "1/3" into an exact rational.
/// Decimal literals are converted digit by digit, never through a double.
/// Throws Error(ErrorKind::TypeMismatch) on malformed input.
Rational parse_rational(std::string_view text);

/// Converts a double to the rational value of its shortest round-trip decimal
/// representation, so 0.1 becomes 1/10 rather than the binary fraction.
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// "p/q" in lowest terms, or "p" for integers.
std::string to_fraction_string(const Rational& value);

/// Formats with the given number of significant digits (default 12, the
/// text-mode precision of the CLI).
std::string format_probability(const Rational& value, int significant_digits = 12);
std::string format_double(double value, int significant_digits = 12);

/// Shortest decimal text that round-trips to the same double.
std::string shortest_double(double value);

}  // namespace disco
