#include "weiss/nullspace/null_functions.hpp"

#include <Eigen/Dense>

#include "weiss/errors.hpp"
#include "weiss/expr/emit.hpp"

namespace weiss::nullspace {

namespace {

using expr::Kind;

bool has_derivative_atoms(const Expr& e) {
  if (e.is(Kind::derivative)) return true;
  for (const auto& a : e.operands()) {
    if (has_derivative_atoms(a)) return true;
  }
  return false;
}

Rational falling_factorial(int k, int m) {
  Rational out = 1;
  for (int i = 0; i < m; ++i) out *= k - i;
  return out;
}

Expr seed_function(const Expr& d_phi, const Expr& phi, int n, int k) {
  return expr::pow(d_phi, Rational(-n, 2)) * expr::pow(phi, k);
}

}  // namespace

std::vector<Expr> basis(const DirectionalOperator& d, const Expr& phi, int n, const expr::SimplifyOptions& options) {
  diffop::WeissOptions wo;
  wo.simplify = options;
  const WeissOperator l = diffop::build_weiss(d, phi, n, wo);
  std::vector<Expr> out;
  for (int k = 0; k <= n; ++k) out.push_back(expr::simplify(seed_function(l.d_phi(), phi, n, k), options));
  return out;
}

std::vector<Expr> default_coefficients(int n) {
  std::vector<Expr> out;
  for (int k = 0; k <= n; ++k) out.push_back(expr::variable("c" + std::to_string(k)));
  return out;
}

NullFunction general_null(const DirectionalOperator& d, const Expr& phi, int n, const std::vector<Expr>& coeffs,
                          const expr::SimplifyOptions& options) {
  if (n < 0) throw InvalidArgument("operator index n must be non-negative");
  if (coeffs.size() != static_cast<std::size_t>(n) + 1) {
    throw CoefficientArityMismatch("expected " + std::to_string(n + 1) + " coefficients, got " +
                                   std::to_string(coeffs.size()));
  }
  const std::vector<Expr> b = basis(d, phi, n, options);
  NullFunction f;
  f.n = n;
  f.phi = phi;
  f.d_phi = d.apply(phi, diffop::Simplification::full, options);
  f.coeffs = coeffs;
  std::vector<Expr> terms;
  for (std::size_t k = 0; k < b.size(); ++k) terms.push_back(coeffs[k] * b[k]);
  f.expr = expr::simplify(expr::sum(std::move(terms)), options);
  return f;
}

TelescopingTrace verify_telescoping(const WeissOperator& l, int k, const expr::ZeroTestConfig& config,
                                    diffop::Simplification mode) {
  const int n = l.n();
  if (k < 0 || k > n) throw InvalidArgument("telescoping index k must lie in 0..n");
  for (const auto& a : l.op().coeffs()) {
    if (has_derivative_atoms(a)) throw NonlinearOperator("telescoping requires a linear operator");
  }
  if (has_derivative_atoms(l.phi())) throw NonlinearOperator("telescoping requires a linear operator");

  TelescopingTrace t;
  t.n = n;
  t.k = k;
  t.states.push_back(seed_function(l.d_phi(), l.phi(), n, k));
  t.expected.push_back(t.states.front());
  t.checks.push_back(expr::is_zero(Expr(), config));
  t.passed = true;
  for (int m = 1; m <= n + 1 && t.passed; ++m) {
    const std::size_t j = static_cast<std::size_t>(n + 1 - m);
    t.states.push_back(l.apply_factor(j, t.states.back(), mode));
    const Rational ff = falling_factorial(k, m);
    t.expected.push_back(ff == 0 ? Expr()
                                 : expr::constant(ff) * expr::pow(l.d_phi(), Rational(m) - Rational(n, 2)) *
                                       expr::pow(l.phi(), k - m));
    t.checks.push_back(expr::is_zero(t.states.back() - t.expected.back(), config));
    t.passed = t.checks.back().zero;
  }
  return t;
}

TelescopingTrace verify_telescoping(const DirectionalOperator& d, const Expr& phi, int n, int k,
                                    const expr::ZeroTestConfig& config) {
  return verify_telescoping(diffop::build_weiss(d, phi, n), k, config);
}

IndependenceCheck independence(const std::vector<Expr>& functions, const expr::SampleDomain& dom, std::uint64_t seed,
                               double threshold) {
  IndependenceCheck out;
  if (functions.empty()) return out;
  expr::SampleDomain guarded = dom;
  for (const auto& f : functions) guarded = expr::with_implicit_guards(guarded, f);
  const auto points = expr::sample_points(guarded, functions.size(), seed);
  const auto size = static_cast<Eigen::Index>(functions.size());
  Eigen::MatrixXd m(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    const expr::Assignment a = expr::assignment_at(guarded, points[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < size; ++j) m(i, j) = expr::evaluate(functions[static_cast<std::size_t>(j)], a);
  }
  out.determinant = m.partialPivLu().determinant();
  out.independent = std::abs(out.determinant) > threshold;
  return out;
}

SelfConsistentSolution solve_self_consistent(const DirectionalOperator& d, const Expr& phi, int n,
                                             const std::vector<Expr>& coeffs, const std::string& unknown,
                                             const expr::SimplifyOptions& options) {
  if (n < 0) throw InvalidArgument("operator index n must be non-negative");
  if (coeffs.size() != static_cast<std::size_t>(n) + 1) {
    throw CoefficientArityMismatch("expected " + std::to_string(n + 1) + " coefficients, got " +
                                   std::to_string(coeffs.size()));
  }
  diffop::WeissOptions wo;
  wo.simplify = options;
  const WeissOperator l = diffop::build_weiss(d, phi, n, wo);
  const Expr d_phi = expr::simplify(l.d_phi(), options);

  const Expr bare = expr::derivative(unknown);
  std::vector<Expr> rest;
  int m = 0;
  const std::vector<Expr> factors = d_phi.is(Kind::product) ? d_phi.operands() : std::vector<Expr>{d_phi};
  for (const auto& f : factors) {
    const auto [b, k] = expr::split_power(f);
    if (b == bare && k.is_constant() && expr::is_integer(k.value())) {
      m += static_cast<int>(*expr::to_int64(k.value()));
    } else if (expr::depends_on_unknown(f, unknown)) {
      throw PatternNotRecognized("D(phi) = " + expr::emit(d_phi) + " is not of the form E*" + unknown + "^m");
    } else {
      rest.push_back(f);
    }
  }
  if (m < 0) {
    throw PatternNotRecognized("D(phi) = " + expr::emit(d_phi) + " carries a negative power of " + unknown);
  }

  SelfConsistentSolution s;
  s.unknown = unknown;
  s.factor = expr::product(std::move(rest));
  s.m = m;
  s.exponent = 1 + Rational(m * n, 2);
  std::vector<Expr> terms;
  for (int k = 0; k <= n; ++k) terms.push_back(coeffs[static_cast<std::size_t>(k)] * expr::pow(phi, k));
  s.polynomial = expr::sum(std::move(terms));
  s.rhs = expr::simplify(expr::pow(s.factor, Rational(-n, 2)), options) * s.polynomial;

  if (m == 0) {
    s.branches.push_back(general_null(d, phi, n, coeffs, options).expr);
    return s;
  }
  const expr::Integer p = expr::numerator(s.exponent);
  const Expr root = expr::pow(s.rhs, 1 / s.exponent);
  s.branches.push_back(root);
  if (p % 2 == 0) s.branches.push_back(-root);
  return s;
}

verify::VerificationReport verify_solution(const DirectionalOperator& d, const Expr& phi, int n,
                                           const Expr& candidate, const expr::SampleDomain& dom, double tol,
                                           std::uint64_t seed, const std::string& unknown, std::size_t samples) {
  const WeissOperator l = diffop::build_weiss(d, phi, n);
  return verify::residual_check(diffop::expand_pde(l, unknown), unknown, candidate, dom, samples, tol, seed);
}

}  // namespace weiss::nullspace
