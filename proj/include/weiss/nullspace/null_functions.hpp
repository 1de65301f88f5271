#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "weiss/diffop/weiss_operator.hpp"
#include "weiss/expr/zero_test.hpp"
#include "weiss/verify/report.hpp"

namespace weiss::nullspace {

using diffop::DirectionalOperator;
using diffop::WeissOperator;
using expr::Expr;
using expr::Rational;

/// [(D phi)^(-n/2) * phi^k for k = 0..n], each simplified.
std::vector<Expr> basis(const DirectionalOperator& d, const Expr& phi, int n,
                        const expr::SimplifyOptions& options = {});

struct NullFunction {
  int n = 0;
  Expr phi;
  Expr d_phi;
  std::vector<Expr> coeffs;
  /// (D phi)^(-n/2) * sum_k c_k phi^k.
  Expr expr;
};

/// Throws CoefficientArityMismatch unless coeffs has n+1 entries.
NullFunction general_null(const DirectionalOperator& d, const Expr& phi, int n, const std::vector<Expr>& coeffs,
                          const expr::SimplifyOptions& options = {});

/// c0, c1, ..., c_n as symbolic parameters.
std::vector<Expr> default_coefficients(int n);

struct TelescopingTrace {
  int n = 0;
  int k = 0;
  /// states[0] is the seed function; states[m] follows m brackets.
  std::vector<Expr> states;
  /// k(k-1)...(k-m+1) (D phi)^(-n/2+m) phi^(k-m), zero once a factor vanishes.
  std::vector<Expr> expected;
  std::vector<expr::ZeroTestResult> checks;
  bool passed = false;
};

/// Applies the brackets of l one at a time, right to left, to
/// (D phi)^(-n/2) phi^k and compares each intermediate with its closed form.
/// Stops at the first mismatch, so a failing trace holds fewer states.
/// The operator must be linear. Throws InvalidArgument unless 0 <= k <= n.
TelescopingTrace verify_telescoping(const WeissOperator& l, int k, const expr::ZeroTestConfig& config,
                                    diffop::Simplification mode = diffop::Simplification::light);

TelescopingTrace verify_telescoping(const DirectionalOperator& d, const Expr& phi, int n, int k,
                                    const expr::ZeroTestConfig& config);

struct IndependenceCheck {
  double determinant = 0.0;
  bool independent = false;
};

inline constexpr double kIndependenceThreshold = 1e-6;

/// Generalized Vandermonde determinant det[f_j(p_i)] at functions.size()
/// guarded sample points of dom.
IndependenceCheck independence(const std::vector<Expr>& functions, const expr::SampleDomain& dom,
                               std::uint64_t seed = expr::kDefaultSeed,
                               double threshold = kIndependenceThreshold);

/// Explicit solutions of psi = (D phi)^(-n/2) P(phi) when D phi = E * psi^m.
struct SelfConsistentSolution {
  std::string unknown;
  std::vector<Expr> branches;
  /// E, free of the unknown.
  Expr factor;
  int m = 0;
  /// 1 + m*n/2, the power of psi after collecting both sides.
  Rational exponent;
  /// E^(-n/2) * P(phi).
  Expr rhs;
  /// P(phi) = sum_k c_k phi^k.
  Expr polynomial;
};

/// Throws PatternNotRecognized when D phi is not E * psi^m with m >= 0,
/// DegenerateProducingFunction, or CoefficientArityMismatch.
SelfConsistentSolution solve_self_consistent(const DirectionalOperator& d, const Expr& phi, int n,
                                             const std::vector<Expr>& coeffs, const std::string& unknown = "psi",
                                             const expr::SimplifyOptions& options = {});

/// expand_pde(L) with psi replaced by the candidate everywhere, including
/// inside the coefficients of D.
verify::VerificationReport verify_solution(const DirectionalOperator& d, const Expr& phi, int n,
                                           const Expr& candidate, const expr::SampleDomain& dom,
                                           double tol = expr::kDefaultTolerance,
                                           std::uint64_t seed = expr::kDefaultSeed,
                                           const std::string& unknown = "psi",
                                           std::size_t samples = expr::kDefaultSamples);

}  // namespace weiss::nullspace
