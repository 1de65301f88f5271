#pragma once

// Hand-rolled random generators shared by the property tests and the
// acceptance suite. Everything is driven by SplitMix64 so failures replay
// from the printed seed.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "weiss/expr/expr.hpp"
#include "weiss/expr/sampling.hpp"

namespace weiss::testing {

using expr::Expr;
using expr::SplitMix64;

inline std::int64_t draw_int(SplitMix64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.next() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline expr::Rational draw_rational(SplitMix64& rng, std::int64_t bound = 3) {
  const std::int64_t den = draw_int(rng, 1, 4);
  return expr::Rational(draw_int(rng, -bound * den, bound * den), den);
}

inline Expr draw_variable(SplitMix64& rng, const std::vector<std::string>& vars) {
  return expr::variable(vars[rng.next() % vars.size()]);
}

/// Polynomial of total degree <= degree with integer coefficients in [-3, 3].
inline Expr random_polynomial(SplitMix64& rng, const std::vector<std::string>& vars, int degree) {
  std::vector<Expr> terms;
  const int count = static_cast<int>(draw_int(rng, 1, 4));
  for (int t = 0; t < count; ++t) {
    Expr m = expr::integer(draw_int(rng, -3, 3));
    const int deg = static_cast<int>(draw_int(rng, 0, degree));
    for (int d = 0; d < deg; ++d) m = m * draw_variable(rng, vars);
    terms.push_back(m);
  }
  return expr::sum(std::move(terms));
}

/// Smooth expression that evaluates finitely on [1,2]^d: fractional powers
/// and logarithms only see bases of the form 1 + u^2, exponentials see
/// damped arguments.
inline Expr random_smooth(SplitMix64& rng, const std::vector<std::string>& vars, int depth) {
  if (depth <= 0 || rng.next() % 4 == 0) {
    if (rng.next() % 3 == 0) return expr::constant(draw_rational(rng));
    return draw_variable(rng, vars);
  }
  const auto sub = [&]() { return random_smooth(rng, vars, depth - 1); };
  const auto positive = [&]() {
    const Expr u = sub();
    return 1 + u * u;
  };
  switch (rng.next() % 8) {
    case 0: return sub() + sub();
    case 1: return sub() - sub();
    case 2: return sub() * sub();
    case 3: return sub() / positive();
    case 4: {
      static const expr::Rational exponents[] = {{1, 2}, {-1, 2}, {3, 2}, {-1}, {2}, {-2}, {1, 3}};
      return expr::pow(positive(), exponents[rng.next() % 7]);
    }
    case 5: return rng.next() % 2 == 0 ? expr::sin(sub()) : expr::cos(sub());
    case 6: {
      const Expr u = sub();
      return expr::exp(u / (4 + u * u));
    }
    default: return expr::log(positive());
  }
}

/// Cubic in x whose derivative stays at least 1/4 in absolute value on
/// [lo, hi], checked on a dense grid (the derivative is a quadratic).
inline Expr random_cubic(SplitMix64& rng, const std::string& x = "x", double lo = 1.0, double hi = 2.0) {
  for (;;) {
    expr::Rational c[4];
    for (auto& ci : c) ci = draw_rational(rng);
    const auto slope = [&](double t) {
      return static_cast<double>(c[1]) + 2 * static_cast<double>(c[2]) * t + 3 * static_cast<double>(c[3]) * t * t;
    };
    bool ok = c[3] != 0;
    const double first = slope(lo);
    for (int i = 0; ok && i <= 200; ++i) {
      const double s = slope(lo + (hi - lo) * i / 200.0);
      ok = std::abs(s) >= 0.25 && s * first > 0;
    }
    if (!ok) continue;
    const Expr v = expr::variable(x);
    return expr::constant(c[0]) + expr::constant(c[1]) * v + expr::constant(c[2]) * expr::pow(v, 2) +
           expr::constant(c[3]) * expr::pow(v, 3);
  }
}

inline expr::SampleDomain unit_box(const std::vector<std::string>& vars, double lo = 1.0, double hi = 2.0) {
  expr::SampleDomain dom;
  for (const auto& v : vars) dom.add(v, lo, hi);
  return dom;
}

}  // namespace weiss::testing
