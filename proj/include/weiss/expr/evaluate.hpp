#pragma once

#include <map>
#include <string>

#include "weiss/expr/expr.hpp"

namespace weiss::expr {

/// Numeric values for variables and parameters, plus optional closed forms
/// for unknown functions. Derivative atoms without a closed form may also be
/// given a value directly under their jet name ("psi_xy"), which is how
/// differential identities are tested with independent jet coordinates.
struct Assignment {
  std::map<std::string, double> values;
  std::map<std::string, Expr> unknowns;
};

/// Real value of e under the principal real branch. Fractional and symbolic
/// exponents require a strictly positive base.
///
/// Throws EvaluationError on a missing symbol, a non-positive base under a
/// fractional power, division by zero or a logarithm of a non-positive value.
double evaluate(const Expr& e, const Assignment& a);

/// Absolute values of the additive terms of e at a point, used to scale
/// residuals. A product of a single sum with other factors contributes the
/// distributed terms.
double term_scale(const Expr& e, const Assignment& a);

/// Resolves derivative atoms of every unknown that has a closed form in `a`.
Expr resolve_unknowns(const Expr& e, const Assignment& a);

}  // namespace weiss::expr
