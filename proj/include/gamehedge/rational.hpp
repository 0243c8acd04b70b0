#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace gamehedge {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses "p/q", integers, and decimals ("-1.25", "3e-2") exactly.
Rational parse_rational(std::string_view text);

/// Canonical exact form: "p" or "p/q".
std::string to_string(const Rational& q);

/// Fixed-point rendering, round-half-even at `places` decimals.
std::string to_decimal(const Rational& q, int places = 6);

double to_double(const Rational& q);

/// Binary-exact conversion of a finite double.
Rational from_double(double x);

/// Smallest-denominator rational within `rel_tol * |x|` of x (continued fractions).
Rational approximate(long double x, long double rel_tol);

inline int sign(const Rational& q) { return q.sign(); }

}  // namespace gamehedge
