#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "weiss/expr/sampling.hpp"

namespace weiss::expr {

inline constexpr std::size_t kDefaultSamples = 32;
inline constexpr double kDefaultTolerance = 1e-8;

struct ZeroTestResult {
  bool zero = false;
  /// Largest scale-normalized residual |e| / (1 + largest additive term).
  double max_residual = 0.0;
  /// First failing point and its normalized residual when `zero` is false.
  std::optional<Point> witness;
  double witness_residual = 0.0;

  explicit operator bool() const noexcept { return zero; }
};

struct ZeroTestConfig {
  SampleDomain domain;
  std::size_t samples = kDefaultSamples;
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = kDefaultSeed;
  /// Closed forms for unknown functions, resolved before sampling.
  std::map<std::string, Expr> unknowns;
};

/// Probabilistic identity test: e is declared zero when its normalized
/// residual stays within tolerance at every guard-accepted sample point.
/// Implicit guards (fractional-power bases, denominators) are added
/// automatically. Throws DomainExhausted when guards reject too many draws.
ZeroTestResult is_zero(const Expr& e, const ZeroTestConfig& config);

ZeroTestResult is_zero(const Expr& e, const SampleDomain& dom, std::size_t samples = kDefaultSamples,
                       double tol = kDefaultTolerance, std::uint64_t seed = kDefaultSeed);

/// is_zero(a - b).
ZeroTestResult equivalent(const Expr& a, const Expr& b, const ZeroTestConfig& config);

}  // namespace weiss::expr
