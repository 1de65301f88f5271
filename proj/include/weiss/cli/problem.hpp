#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weiss/diffop/directional_operator.hpp"
#include "weiss/expr/sampling.hpp"
#include "weiss/expr/simplify.hpp"

namespace weiss::cli {

/// Raw contents of a problem file. Expressions are kept as text until
/// compile() parses them.
///
/// The file is a sequence of `key = value` statements separated by `;` or
/// newlines; `#` starts a comment. Values are integers, decimals, quoted
/// strings, lists `[...]` and interval maps `{x=[1,2], y=[1,2]}`:
///
///   variables = ["x","y"]; coefficients = ["1","-1"]; phi = "x/y"
///   order_n = 1; solution_coefficients = ["c0","c1"]
///   domain = {x=[1,2], y=[1,2]}
///   parameter_values = {c0=1, c1=2}
struct ProblemSpec {
  std::vector<std::string> variables;
  std::vector<std::string> coefficients;
  std::string phi;
  int order_n = 0;
  std::string unknown = "psi";
  /// Defaults to c0..c_n when absent.
  std::vector<std::string> solution_coefficients;
  std::vector<expr::Interval> domain;
  std::optional<double> tolerance;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  /// Values bound to parameters before verification, as expression text.
  std::map<std::string, std::string> parameter_values;
};

/// Throws ParseError on malformed text and InvalidArgument on unknown keys
/// or missing required fields.
ProblemSpec parse_problem(const std::string& text);

ProblemSpec load_problem(const std::string& path);

/// A validated problem with parsed expressions.
struct Problem {
  ProblemSpec spec;
  diffop::DirectionalOperator op;
  expr::Expr phi;
  std::vector<expr::Expr> solution_coefficients;
  std::map<std::string, expr::Expr> parameter_values;
  /// Every variable gets an interval; [1, 2] when the file gives none.
  expr::SampleDomain domain;
  /// Variables whose interval lies in (0, inf) are assumed positive.
  expr::SimplifyOptions simplify;
};

/// Checks the length invariants and parses every expression. Throws
/// InvalidArgument, CoefficientArityMismatch or ParseError.
Problem compile(const ProblemSpec& spec);

}  // namespace weiss::cli
