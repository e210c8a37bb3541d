#pragma once

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace causalforge {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "5/13", "3", "-1/2" -> Rational; throws InputError on junk
Rational parse_rational(const std::string& text);

std::string rational_str(const Rational& q);

// exact integer square root, if n is a perfect square
std::optional<BigInt> exact_isqrt(const BigInt& n);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt floor_div(const BigInt& num, const BigInt& den);
BigInt rational_floor(const Rational& q);

} // namespace causalforge
