#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "weiss/expr/expr.hpp"

namespace weiss::expr {

/// Facts the simplifier may rely on when rewriting fractional powers.
struct Assumptions {
  /// Variables known to be strictly positive, so (y^-2)^(-1/2) may become y.
  std::set<std::string> positive;
};

struct SimplifyOptions {
  Assumptions assumptions;
  /// Upper bound on the number of monomials produced by one expansion; larger
  /// products are kept factored.
  std::size_t term_budget = 4000;
};

/// Best-effort normal form: the expression is expanded into monomials, put
/// over a common denominator, and common monomial factors and rational
/// content are pulled out of the numerator. The result is semantically equal
/// to the input wherever the input evaluates; it is not guaranteed minimal.
Expr simplify(const Expr& e, const SimplifyOptions& options = {});

/// Fully distributed sum of monomials (no common denominator).
Expr expand(const Expr& e, const SimplifyOptions& options = {});

/// Groups the expanded monomials of e by the product of their factors whose
/// base satisfies `is_key`. Returns (key, simplified coefficient) pairs in
/// canonical key order; the key of monomials with no such factor is 1.
std::vector<std::pair<Expr, Expr>> collect_by(const Expr& e, const std::function<bool(const Expr&)>& is_key,
                                              const SimplifyOptions& options = {});

}  // namespace weiss::expr
