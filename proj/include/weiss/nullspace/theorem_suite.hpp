#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "weiss/diffop/weiss_operator.hpp"

namespace weiss::nullspace {

/// One randomized operator: D = sum a_i d/dx_i over [1,2]^d with integer
/// polynomial a_i and phi of degree <= 2, chosen so that D phi stays
/// positive on the box.
struct TheoremInstance {
  std::uint64_t seed = 0;
  std::vector<std::string> vars;
  std::vector<expr::Expr> coeffs;
  expr::Expr phi;
  int n = 0;

  std::string describe() const;
};

/// Deterministic in `seed`. Draws are repeated until D phi is usable.
TheoremInstance random_instance(std::uint64_t seed, int max_dim, int max_n, std::optional<int> fixed_n = {});

struct TheoremSuiteConfig {
  int max_dim = 3;
  int max_n = 4;
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  double tolerance = 1e-7;
  std::size_t samples = 16;
  /// Restrict every instance to this n (used for mutation runs).
  std::optional<int> fixed_n;
  bool telescoping = true;
  /// Unsimplified (light) application swells past 10^6 nodes at n = 4 in
  /// three variables, so each bracket is simplified by default.
  diffop::Simplification mode = diffop::Simplification::full;
  diffop::OperatorMutation mutation;
  /// Return after the first failing check. Mutated operators swell once a
  /// state stops telescoping, so detection runs should set this.
  bool stop_on_failure = false;
};

struct TheoremFailure {
  TheoremInstance instance;
  /// Basis index, or -1 for the superposition check.
  int k = 0;
  std::string check;
  std::string detail;
};

struct TheoremSuiteResult {
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t passed = 0;
  std::vector<TheoremFailure> failures;

  bool all_passed() const noexcept { return failures.empty(); }
};

/// For every instance and every k <= n: L_{n+1} annihilates basis_k, the
/// telescoping intermediates match their closed forms, and a random rational
/// combination of the basis is annihilated too.
TheoremSuiteResult run_theorem_suite(const TheoremSuiteConfig& config);

}  // namespace weiss::nullspace
