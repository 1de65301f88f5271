#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "weiss/expr/rational.hpp"

namespace weiss::expr {

enum class Kind : std::uint8_t { constant, variable, derivative, function, sum, product, power };

/// Elementary functions. `sqrt` is accepted by the parser and the builders but
/// is always stored as a power with exponent 1/2.
enum class Function : std::uint8_t { exp, log, sin, cos, sqrt };

std::string_view function_name(Function f);

/// Partial-derivative orders keyed by variable name; zero orders are never
/// stored, so the empty index denotes the undifferentiated unknown.
using MultiIndex = std::map<std::string, int>;

class Node;

/// Immutable expression handle. Copies share the underlying node, so values
/// are cheap to pass around and safe to read from several threads.
///
/// All construction goes through the free builders below (or the arithmetic
/// operators), which keep the tree in a light canonical form: rational
/// constants in lowest terms, nested sums/products flattened, numeric
/// constants folded, like terms and like bases merged, operands sorted.
class Expr {
 public:
  /// The constant zero.
  Expr();
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  Kind kind() const noexcept;
  bool is(Kind k) const noexcept { return kind() == k; }
  bool is_constant() const noexcept { return is(Kind::constant); }
  bool is_zero() const noexcept;
  bool is_one() const noexcept;

  /// Constant value; only valid for Kind::constant.
  const Rational& value() const;
  /// Variable name or unknown-function name.
  const std::string& name() const;
  const MultiIndex& index() const;
  Function function() const;
  /// Operands of a sum/product, {base, exponent} of a power, {argument} of a function.
  const std::vector<Expr>& operands() const;
  const Expr& base() const;
  const Expr& exponent() const;
  const Expr& argument() const;

  std::size_t hash() const noexcept;
  const Node* node() const noexcept { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend class NodeFactory;

  std::shared_ptr<const Node> node_;
};

/// Total structural order used for canonical sorting and as a map key.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

// Builders.
Expr constant(const Rational& value);
Expr integer(std::int64_t value);
Expr rational(std::int64_t num, std::int64_t den);
Expr variable(std::string name);
Expr derivative(std::string unknown, MultiIndex index = {});
Expr apply(Function f, const Expr& argument);
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr power(const Expr& base, const Expr& exponent);
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);

/// Splits a term into its rational coefficient and the remaining factors
/// (the remainder is 1 for a bare constant).
std::pair<Rational, Expr> split_coefficient(const Expr& term);

/// Splits a factor into (base, exponent); non-powers have exponent 1.
std::pair<Expr, Expr> split_power(const Expr& factor);

/// Variable names, parameter names and unknown-function names occurring in e.
std::set<std::string> free_symbols(const Expr& e);

/// True when e contains a derivative atom of `unknown` (any order).
bool depends_on_unknown(const Expr& e, const std::string& unknown);

/// True when e contains the variable `name` or any derivative atom (whose
/// arguments are implicitly all variables).
bool depends_on(const Expr& e, const std::string& name);

/// Exact partial derivative with respect to `var`. Derivative atoms have
/// their multi-index incremented.
Expr differentiate(const Expr& e, const std::string& var);

/// Repeated differentiation following a multi-index.
Expr differentiate(const Expr& e, const MultiIndex& index);

/// Simultaneous substitution. A binding for a variable replaces that
/// variable; a binding for an unknown-function name replaces every
/// derivative atom of it by the matching derivative of the bound closed form.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Name of a derivative atom as written in the plain grammar, e.g. "psi_xy".
std::string jet_name(const std::string& unknown, const MultiIndex& index);

/// Total derivative order of a multi-index.
int order(const MultiIndex& index);

}  // namespace weiss::expr
