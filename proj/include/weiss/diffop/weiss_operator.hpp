#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weiss/diffop/directional_operator.hpp"
#include "weiss/expr/rational.hpp"

namespace weiss::diffop {

using expr::Rational;

inline constexpr int kDefaultMaxOrder = 16;

/// Deliberate corruptions used to check that the verification harness is
/// not vacuous. Never set outside tests and the theorem-check hook.
struct OperatorMutation {
  /// Negate the coefficient of factor j (left-to-right position).
  std::optional<std::size_t> flipped_factor;
  /// Replace V = D^2 phi / D phi by D^2 phi * D phi.
  bool corrupt_pre_schwarzian = false;
};

struct WeissOptions {
  int max_order = kDefaultMaxOrder;
  expr::SimplifyOptions simplify;
  OperatorMutation mutation;
};

/// V = D^2 phi / D phi. Throws DegenerateProducingFunction when D phi
/// vanishes identically.
Expr pre_schwarzian(const DirectionalOperator& d, const Expr& phi, const expr::SimplifyOptions& options = {});

/// Q = (D V - V^2 / 2) / 2, the potential of the second-order member.
Expr q_potential(const DirectionalOperator& d, const Expr& phi, const expr::SimplifyOptions& options = {});

/// The factored operator L_{n+1} = (D - n/2 V)(D + (1 - n/2) V) ... (D + n/2 V).
///
/// Factor j (counted left to right from 0) carries the exact coefficient
/// j - n/2. Application runs right to left: the rightmost bracket acts
/// first, since the brackets do not commute.
class WeissOperator {
 public:
  int n() const noexcept { return n_; }
  int order() const noexcept { return n_ + 1; }
  const DirectionalOperator& op() const noexcept { return d_; }
  const Expr& phi() const noexcept { return phi_; }
  const Expr& d_phi() const noexcept { return d_phi_; }
  const Expr& d2_phi() const noexcept { return d2_phi_; }
  const Expr& pre_schwarzian() const noexcept { return v_; }
  /// Q = (DV - V^2/2)/2, computed on first use.
  Expr q_potential() const;
  const std::vector<Rational>& factor_coefficients() const noexcept { return factors_; }
  const expr::SimplifyOptions& simplify_options() const noexcept { return simplify_; }

  /// True when D or V contains the unknown.
  bool nonlinear(const std::string& unknown) const;

  /// L_{n+1} f.
  Expr apply(const Expr& f, Simplification mode = Simplification::full) const;

  /// One bracket: f -> D f + c_j V f.
  Expr apply_factor(std::size_t j, const Expr& f, Simplification mode = Simplification::full) const;

  /// "(D - 1/2*V)(D + 1/2*V)".
  std::string describe(expr::Format format = expr::Format::plain) const;

 private:
  friend WeissOperator build_weiss(const DirectionalOperator&, const Expr&, int, const WeissOptions&);
  WeissOperator(DirectionalOperator d, Expr phi, int n) : d_(std::move(d)), phi_(std::move(phi)), n_(n) {}

  DirectionalOperator d_;
  Expr phi_;
  int n_;
  Expr d_phi_;
  Expr d2_phi_;
  Expr v_;
  std::vector<Rational> factors_;
  expr::SimplifyOptions simplify_;
};

/// Throws DegenerateProducingFunction, or InvalidArgument when n is negative
/// or above options.max_order.
WeissOperator build_weiss(const DirectionalOperator& d, const Expr& phi, int n, const WeissOptions& options = {});

Expr apply_weiss(const WeissOperator& l, const Expr& f, Simplification mode = Simplification::full);

/// sum_alpha c_alpha(x) d^alpha acting on the unknown; multi-indices are in
/// the operator's variable order.
struct NormalForm {
  std::vector<std::string> vars;
  std::map<std::vector<int>, Expr> coefficients;

  /// Coefficient of d^alpha, zero when absent.
  Expr coefficient(const std::vector<int>& alpha) const;
  /// sum_alpha c_alpha * d^alpha f.
  Expr apply(const Expr& f) const;
  /// The operator applied to the unknown, as a PDE left-hand side.
  Expr to_expr(const std::string& unknown) const;
};

/// Expands a linear L into normal form by applying it to the unknown and
/// collecting the coefficient of each derivative. Throws NonlinearOperator
/// when D or V depends on the unknown.
NormalForm normal_form(const WeissOperator& l, const std::string& unknown = "psi");

/// L applied to the unknown, collected by monomials in the unknown's
/// derivatives. Works for ψ-dependent coefficients as well.
Expr expand_pde(const WeissOperator& l, const std::string& unknown = "psi");

/// Terms of a PDE left-hand side ordered for display: highest derivative
/// order first, then by the derivative monomial.
std::vector<Expr> pde_terms(const Expr& pde, const std::string& unknown = "psi");

/// Cancels the common power of the undifferentiated unknown from every term
/// and scales the PDE so its leading term (highest derivative order, first
/// in canonical order) has rational coefficient 1.
Expr divide_common_factor(const Expr& pde, const std::string& unknown = "psi");

}  // namespace weiss::diffop
