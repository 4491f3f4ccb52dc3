#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace partrace {

/// Arbitrary-precision integer used for program constants and constraint
/// coefficients.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// floor(a / b) for b != 0.
Int floor_div(const Int& a, const Int& b);
/// ceil(a / b) for b != 0.
Int ceil_div(const Int& a, const Int& b);
Int gcd(const Int& a, const Int& b);

Int floor(const Rational& r);
Int ceil(const Rational& r);

inline std::string to_string(const Int& v) { return v.str(); }

}  // namespace partrace
