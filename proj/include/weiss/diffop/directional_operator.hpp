#pragma once

#include <string>
#include <vector>

#include "weiss/expr/emit.hpp"
#include "weiss/expr/expr.hpp"
#include "weiss/expr/simplify.hpp"

namespace weiss::diffop {

using expr::Expr;

/// How aggressively operator application normalizes its result. `light`
/// keeps only the canonical form maintained by the expression builders,
/// which is much cheaper on large randomized instances.
enum class Simplification { full, light };

/// First-order operator D = sum_i a_i(x) d/dx_i over an ordered variable
/// list. Coefficients may contain derivative atoms of the unknown function,
/// in which case D is a nonlinear (self-referential) operator.
class DirectionalOperator {
 public:
  /// Throws InvalidArgument if the lists differ in length or are empty.
  DirectionalOperator(std::vector<std::string> vars, std::vector<Expr> coeffs);

  const std::vector<std::string>& vars() const noexcept { return vars_; }
  const std::vector<Expr>& coeffs() const noexcept { return coeffs_; }
  std::size_t dimension() const noexcept { return vars_.size(); }

  bool depends_on_unknown(const std::string& unknown) const;

  /// sum_i a_i * de/dx_i.
  Expr apply(const Expr& e, Simplification mode = Simplification::full,
             const expr::SimplifyOptions& options = {}) const;

  /// k-fold composition D(D(...D(e))); k >= 1.
  Expr apply_power(const Expr& e, int k, Simplification mode = Simplification::full,
                   const expr::SimplifyOptions& options = {}) const;

  /// Human-readable form, e.g. "d/dx - d/dy + x^2*d/dz".
  std::string describe(expr::Format format = expr::Format::plain) const;

 private:
  std::vector<std::string> vars_;
  std::vector<Expr> coeffs_;
};

}  // namespace weiss::diffop
