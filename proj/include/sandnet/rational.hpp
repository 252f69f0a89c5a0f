#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace sandnet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "880", "-2", "0.1", ".25" or "1/10" exactly.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// Terminating decimal when the reduced denominator divides a power of ten, "p/q" otherwise.
std::string format_rational(const Rational& value);

/// Largest integer not greater than `value`.
BigInt floor(const Rational& value);

}  // namespace sandnet
