#pragma once

#include <string>
#include <vector>

#include "weiss/expr/expr.hpp"

namespace weiss::expr {

enum class Format { plain, latex };

/// Deterministic rendering. Plain output re-parses to an equal expression;
/// derivative atoms render as `psi_xy` (plain) or `\psi_{xy}` (LaTeX).
std::string emit(const Expr& e, Format format = Format::plain);

/// Renders terms as a top-level sum in the given order instead of the
/// canonical one.
std::string emit_sum(const std::vector<Expr>& terms, Format format = Format::plain);

}  // namespace weiss::expr
