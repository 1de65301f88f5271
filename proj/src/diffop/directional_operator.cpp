#include "weiss/diffop/directional_operator.hpp"

#include "weiss/errors.hpp"

namespace weiss::diffop {

DirectionalOperator::DirectionalOperator(std::vector<std::string> vars, std::vector<Expr> coeffs)
    : vars_(std::move(vars)), coeffs_(std::move(coeffs)) {
  if (vars_.empty()) throw InvalidArgument("directional operator needs at least one variable");
  if (vars_.size() != coeffs_.size()) {
    throw InvalidArgument("directional operator has " + std::to_string(vars_.size()) + " variables but " +
                          std::to_string(coeffs_.size()) + " coefficients");
  }
}

bool DirectionalOperator::depends_on_unknown(const std::string& unknown) const {
  for (const auto& a : coeffs_) {
    if (expr::depends_on_unknown(a, unknown)) return true;
  }
  return false;
}

Expr DirectionalOperator::apply(const Expr& e, Simplification mode, const expr::SimplifyOptions& options) const {
  std::vector<Expr> terms;
  terms.reserve(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (coeffs_[i].is_zero()) continue;
    terms.push_back(coeffs_[i] * expr::differentiate(e, vars_[i]));
  }
  Expr out = expr::sum(std::move(terms));
  return mode == Simplification::full ? expr::simplify(out, options) : out;
}

Expr DirectionalOperator::apply_power(const Expr& e, int k, Simplification mode,
                                      const expr::SimplifyOptions& options) const {
  if (k < 1) throw InvalidArgument("apply_power needs k >= 1");
  Expr out = e;
  for (int i = 0; i < k; ++i) out = apply(out, mode, options);
  return out;
}

std::string DirectionalOperator::describe(expr::Format format) const {
  const bool latex = format == expr::Format::latex;
  std::string out;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    const Expr& a = coeffs_[i];
    if (a.is_zero()) continue;
    const std::string partial = latex ? "\\partial_{" + vars_[i] + "}" : "d/d" + vars_[i];
    const bool negative = expr::split_coefficient(a).first < 0;
    const Expr shown = negative ? -a : a;
    if (!out.empty()) out += negative ? " - " : " + ";
    else if (negative) out += "-";
    if (shown.is_one()) {
      out += partial;
    } else {
      std::string c = expr::emit(shown, format);
      if (shown.is(expr::Kind::sum)) c = latex ? "\\left(" + c + "\\right)" : "(" + c + ")";
      out += c + (latex ? " " : "*") + partial;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace weiss::diffop
