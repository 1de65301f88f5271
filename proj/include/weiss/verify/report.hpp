#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "weiss/expr/evaluate.hpp"
#include "weiss/expr/sampling.hpp"
#include "weiss/expr/zero_test.hpp"

namespace weiss::verify {

using expr::Expr;
using expr::Point;
using expr::SampleDomain;

enum class Verdict { pass, fail, inconclusive };

std::string verdict_name(Verdict v);

struct VerificationReport {
  std::string expression;
  std::string domain;
  std::uint64_t seed = expr::kDefaultSeed;
  std::size_t samples = 0;
  /// Coordinate names of each accepted point, in domain order.
  std::vector<std::string> coordinates;
  std::vector<Point> points;
  std::vector<double> residuals;
  /// Largest normalized residual |e| / (1 + largest additive term).
  double max_residual = 0.0;
  /// Largest raw |e|, for reading off the size of a violation.
  double max_abs_value = 0.0;
  double tolerance = expr::kDefaultTolerance;
  Verdict verdict = Verdict::inconclusive;
  /// Why the run was inconclusive, empty otherwise.
  std::string note;

  bool passed() const noexcept { return verdict == Verdict::pass; }
};

/// Substitutes `candidate` for `unknown` in pde_lhs (resolving every
/// derivative atom) and records the scale-normalized residual at each sample
/// point. Domain exhaustion and evaluation failures give an inconclusive
/// report instead of throwing.
VerificationReport residual_check(const Expr& pde_lhs, const std::string& unknown, const Expr& candidate,
                                  const SampleDomain& dom, std::size_t count = expr::kDefaultSamples,
                                  double tol = expr::kDefaultTolerance, std::uint64_t seed = expr::kDefaultSeed);

/// Same, for an expression that should vanish on its own.
VerificationReport residual_check(const Expr& e, const SampleDomain& dom, std::size_t count = expr::kDefaultSamples,
                                  double tol = expr::kDefaultTolerance, std::uint64_t seed = expr::kDefaultSeed);

struct FdResult {
  double symbolic = 0.0;
  double numeric = 0.0;
  double abs_diff = 0.0;
};

inline constexpr double kDefaultFdStep = 1e-4;

/// Central difference (e(p+h) - e(p-h)) / 2h against the symbolic derivative.
FdResult fd_crosscheck(const Expr& e, const std::string& var, const expr::Assignment& point,
                       double h = kDefaultFdStep);

/// Flat "key = value" lines; doubles printed with 17 significant digits.
std::string to_key_value(const VerificationReport& r, bool include_points = true);

nlohmann::ordered_json to_json(const VerificationReport& r);

/// %.17g rendering shared by every serializer.
std::string format_double(double v);

}  // namespace weiss::verify
