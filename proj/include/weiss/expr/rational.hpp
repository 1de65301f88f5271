#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace weiss::expr {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// True for integers divisible by two, including zero.
bool is_even_integer(const Rational& q);

/// Integer value if q is an integer that fits in 64 bits.
std::optional<std::int64_t> to_int64(const Rational& q);

/// q^k for an integer k; q must be nonzero when k < 0.
Rational pow(const Rational& q, std::int64_t k);

/// Exact value of q^(p/r) if it is rational (q > 0, r-th roots exact).
std::optional<Rational> exact_power(const Rational& q, const Rational& exponent);

/// Positive rational gcd: the largest c with every a_i / c an integer combination.
Rational gcd(const Rational& a, const Rational& b);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double v);

std::size_t hash_value(const Rational& q);

}  // namespace weiss::expr
