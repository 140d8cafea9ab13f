#ifndef ENTROFLOW_NUMERIC_HPP
#define ENTROFLOW_NUMERIC_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace entroflow {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// 3^e as an exact integer.
BigInt pow3(unsigned e);

/// 2^e as an exact integer.
BigInt pow2(unsigned e);

/// "p/q" in lowest terms; integers print as "p/1" so the wire format is uniform.
std::string to_wire(const Rational& q);

/// Decimal digits of an integer.
std::string to_wire(const BigInt& n);

/// Accepts "p/q", "p", or a decimal literal such as "0.25" or "1e-3".
/// Decimals are converted exactly (no binary floating point in between).
Rational parse_rational(std::string_view text);

/// Rounds a real to 12 significant digits and returns that decimal exactly.
Rational snap12(double x);

/// Exact rational rendering with `digits` significant digits in %g style.
/// Works for values whose magnitude is far outside the double range.
std::string format_sig(const Rational& q, int digits = 12);
std::string format_sig(double x, int digits = 12);

/// Floor of a rational as an integer.
BigInt floor_of(const Rational& q);

/// Nearest double; saturates to 0 or +/-inf outside the double range.
double to_double(const Rational& q);

}  // namespace entroflow

#endif
