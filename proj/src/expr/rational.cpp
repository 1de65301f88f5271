#include "weiss/expr/rational.hpp"

#include <cmath>
#include <functional>

namespace weiss::expr {

namespace {

std::optional<Integer> exact_root(const Integer& n, std::int64_t r) {
  if (n < 0) return std::nullopt;
  if (n == 0 || n == 1) return n;
  const double estimate = std::pow(n.convert_to<double>(), 1.0 / static_cast<double>(r));
  if (!std::isfinite(estimate) || estimate > 9.0e15) return std::nullopt;
  const auto guess = static_cast<std::int64_t>(std::llround(estimate));
  for (std::int64_t candidate = std::max<std::int64_t>(guess - 1, 0); candidate <= guess + 1; ++candidate) {
    Integer value = 1;
    for (std::int64_t i = 0; i < r; ++i) value *= candidate;
    if (value == n) return Integer(candidate);
  }
  return std::nullopt;
}

}  // namespace

bool is_even_integer(const Rational& q) {
  if (!is_integer(q)) return false;
  return (numerator(q) % 2) == 0;
}

std::optional<std::int64_t> to_int64(const Rational& q) {
  if (!is_integer(q)) return std::nullopt;
  const Integer n = numerator(q);
  if (n > std::numeric_limits<std::int64_t>::max() || n < std::numeric_limits<std::int64_t>::min()) return std::nullopt;
  return n.convert_to<std::int64_t>();
}

Rational pow(const Rational& q, std::int64_t k) {
  if (k < 0) return Rational(1) / pow(q, -k);
  Integer num = boost::multiprecision::pow(numerator(q), static_cast<unsigned>(k));
  Integer den = boost::multiprecision::pow(denominator(q), static_cast<unsigned>(k));
  return Rational(num, den);
}

std::optional<Rational> exact_power(const Rational& q, const Rational& exponent) {
  const auto num = to_int64(Rational(numerator(exponent)));
  const auto den = to_int64(Rational(denominator(exponent)));
  if (!num || !den) return std::nullopt;
  if (std::abs(*num) > 4096) return std::nullopt;
  if (q == 0) {
    if (*num > 0) return Rational(0);
    return std::nullopt;
  }
  if (*den == 1) return pow(q, *num);
  if (q < 0) return std::nullopt;
  const auto root_num = exact_root(numerator(q), *den);
  const auto root_den = exact_root(denominator(q), *den);
  if (!root_num || !root_den) return std::nullopt;
  return pow(Rational(*root_num, *root_den), *num);
}

Rational gcd(const Rational& a, const Rational& b) {
  if (a == 0) return abs(b);
  if (b == 0) return abs(a);
  Integer n = boost::multiprecision::gcd(numerator(a), numerator(b));
  Integer d = boost::multiprecision::lcm(denominator(a), denominator(b));
  return abs(Rational(n, d));
}

std::string to_string(const Rational& q) {
  if (is_integer(q)) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational from_double(double v) {
  if (v == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(v, &exponent);
  // mantissa * 2^53 is an exact integer
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational result(scaled);
  if (exponent > 0) result *= pow(Rational(2), exponent);
  if (exponent < 0) result /= pow(Rational(2), -exponent);
  return result;
}

std::size_t hash_value(const Rational& q) {
  const auto small_num = to_int64(Rational(numerator(q)));
  const auto small_den = to_int64(Rational(denominator(q)));
  if (small_num && small_den) {
    std::size_t h = std::hash<std::int64_t>{}(*small_num);
    h ^= std::hash<std::int64_t>{}(*small_den) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
  return std::hash<std::string>{}(to_string(q));
}

}  // namespace weiss::expr
