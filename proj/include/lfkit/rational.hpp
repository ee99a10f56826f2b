#ifndef LFKIT_RATIONAL_HPP
#define LFKIT_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace lfkit {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p", or a finite decimal such as "-0.125" exactly.
Rational parse_rational(std::string_view text);

/// Reduced "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Closest fraction with denominator at most `max_denominator`
/// (continued-fraction convergents and semiconvergents).
Rational rationalize(double value, const Integer& max_denominator);

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector (gcd 1). The zero vector is returned unchanged.
RationalVector primitive_integer(const RationalVector& v);

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace lfkit

#endif  // LFKIT_RATIONAL_HPP
