#include "weiss/diffop/weiss_operator.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "weiss/errors.hpp"
#include "weiss/expr/evaluate.hpp"
#include "weiss/expr/sampling.hpp"

namespace weiss::diffop {

namespace {

using expr::Kind;

void collect_jet_names(const Expr& e, std::set<std::string>& out) {
  if (e.is(Kind::derivative)) {
    out.insert(expr::jet_name(e.name(), e.index()));
    return;
  }
  if (e.is_constant() || e.is(Kind::variable)) return;
  for (const auto& a : e.operands()) collect_jet_names(a, out);
}

// D phi is degenerate if it simplifies to 0, or if it evaluates to zero at
// every probe point where it can be evaluated at all.
bool identically_zero(const Expr& d_phi) {
  if (d_phi.is_zero()) return true;
  std::set<std::string> names = expr::free_symbols(d_phi);
  collect_jet_names(d_phi, names);
  expr::SampleDomain dom;
  for (const auto& n : names) dom.add(n, 0.5, 1.5);
  expr::SplitMix64 rng(0x5eed);
  int evaluated = 0;
  for (int i = 0; i < 16; ++i) {
    expr::Assignment a;
    for (const auto& iv : dom.intervals) a.values[iv.name] = iv.lo + (iv.hi - iv.lo) * rng.uniform();
    try {
      const double v = expr::evaluate(d_phi, a);
      if (std::abs(v) > 1e-12 * (1.0 + expr::term_scale(d_phi, a))) return false;
      ++evaluated;
    } catch (const EvaluationError&) {
    }
  }
  return evaluated > 0;
}

Expr compute_v(const Expr& d_phi, const Expr& d2_phi,
               const expr::SimplifyOptions& options) {
  return expr::simplify(d2_phi / d_phi, options);
}

}  // namespace

Expr pre_schwarzian(const DirectionalOperator& d, const Expr& phi, const expr::SimplifyOptions& options) {
  const Expr d_phi = d.apply(phi, Simplification::full, options);
  if (identically_zero(d_phi)) throw DegenerateProducingFunction("D(phi) vanishes identically");
  return compute_v(d_phi, d.apply(d_phi, Simplification::full, options), options);
}

Expr q_potential(const DirectionalOperator& d, const Expr& phi, const expr::SimplifyOptions& options) {
  const Expr v = pre_schwarzian(d, phi, options);
  const Expr dv = d.apply(v, Simplification::full, options);
  return expr::simplify(expr::rational(1, 2) * (dv - expr::rational(1, 2) * v * v), options);
}

WeissOperator build_weiss(const DirectionalOperator& d, const Expr& phi, int n, const WeissOptions& options) {
  if (n < 0) throw InvalidArgument("operator index n must be non-negative");
  if (n > options.max_order) {
    throw InvalidArgument("operator index n = " + std::to_string(n) + " exceeds the configured cap " +
                          std::to_string(options.max_order));
  }
  WeissOperator l(d, phi, n);
  l.simplify_ = options.simplify;
  l.d_phi_ = d.apply(phi, Simplification::full, options.simplify);
  if (identically_zero(l.d_phi_)) throw DegenerateProducingFunction("D(phi) vanishes identically");
  l.d2_phi_ = d.apply(l.d_phi_, Simplification::full, options.simplify);
  l.v_ = options.mutation.corrupt_pre_schwarzian ? expr::simplify(l.d2_phi_ * l.d_phi_, options.simplify)
                                                 : compute_v(l.d_phi_, l.d2_phi_, options.simplify);
  for (int j = 0; j <= n; ++j) l.factors_.push_back(Rational(j) - Rational(n, 2));
  if (const auto& flip = options.mutation.flipped_factor; flip && *flip < l.factors_.size()) {
    l.factors_[*flip] = -l.factors_[*flip];
  }
  return l;
}

Expr WeissOperator::q_potential() const {
  const Expr dv = d_.apply(v_, Simplification::full, simplify_);
  return expr::simplify(expr::rational(1, 2) * (dv - expr::rational(1, 2) * v_ * v_), simplify_);
}

bool WeissOperator::nonlinear(const std::string& unknown) const {
  return d_.depends_on_unknown(unknown) || expr::depends_on_unknown(v_, unknown);
}

Expr WeissOperator::apply_factor(std::size_t j, const Expr& f, Simplification mode) const {
  Expr out = d_.apply(f, Simplification::light) + expr::constant(factors_.at(j)) * v_ * f;
  return mode == Simplification::full ? expr::simplify(out, simplify_) : out;
}

Expr WeissOperator::apply(const Expr& f, Simplification mode) const {
  Expr out = f;
  for (std::size_t j = factors_.size(); j-- > 0;) out = apply_factor(j, out, mode);
  return out;
}

std::string WeissOperator::describe(expr::Format format) const {
  std::string out;
  for (const auto& c : factors_) {
    if (c == 0) {
      out += factors_.size() == 1 ? "D" : "(D)";
      continue;
    }
    const Rational mag = abs(c);
    std::string coeff = mag == 1 ? "" : expr::emit(expr::constant(mag), format) + (format == expr::Format::latex ? " " : "*");
    out += std::string("(D ") + (c < 0 ? "- " : "+ ") + coeff + "V)";
  }
  return out;
}

Expr apply_weiss(const WeissOperator& l, const Expr& f, Simplification mode) { return l.apply(f, mode); }

// ---- normal form -------------------------------------------------------------

Expr NormalForm::coefficient(const std::vector<int>& alpha) const {
  auto it = coefficients.find(alpha);
  return it == coefficients.end() ? Expr() : it->second;
}

Expr NormalForm::apply(const Expr& f) const {
  std::vector<Expr> terms;
  for (const auto& [alpha, c] : coefficients) {
    expr::MultiIndex index;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (alpha[i] > 0) index[vars[i]] = alpha[i];
    }
    terms.push_back(c * expr::differentiate(f, index));
  }
  return expr::sum(std::move(terms));
}

Expr NormalForm::to_expr(const std::string& unknown) const {
  std::vector<Expr> terms;
  for (const auto& [alpha, c] : coefficients) {
    expr::MultiIndex index;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (alpha[i] > 0) index[vars[i]] = alpha[i];
    }
    terms.push_back(c * expr::derivative(unknown, index));
  }
  return expr::sum(std::move(terms));
}

NormalForm normal_form(const WeissOperator& l, const std::string& unknown) {
  if (l.nonlinear(unknown)) {
    throw NonlinearOperator("normal form requires coefficients free of '" + unknown + "'");
  }
  const Expr applied = l.apply(expr::derivative(unknown), Simplification::full);
  NormalForm nf;
  nf.vars = l.op().vars();
  nf.coefficients[std::vector<int>(nf.vars.size(), 0)] = Expr();
  const auto groups = expr::collect_by(
      applied, [&](const Expr& b) { return expr::depends_on_unknown(b, unknown); }, l.simplify_options());
  for (const auto& [key, coefficient] : groups) {
    if (!key.is(Kind::derivative) || key.name() != unknown) {
      throw NonlinearOperator("operator output is not linear in '" + unknown + "'");
    }
    std::vector<int> alpha(nf.vars.size(), 0);
    for (const auto& [var, count] : key.index()) {
      auto pos = std::find(nf.vars.begin(), nf.vars.end(), var);
      if (pos == nf.vars.end()) throw NonlinearOperator("derivative in undeclared variable '" + var + "'");
      alpha[static_cast<std::size_t>(pos - nf.vars.begin())] = count;
    }
    nf.coefficients[alpha] = coefficient;
  }
  return nf;
}

Expr expand_pde(const WeissOperator& l, const std::string& unknown) {
  const Expr applied = l.apply(expr::derivative(unknown), Simplification::full);
  std::vector<Expr> terms;
  for (const auto& [key, coefficient] : expr::collect_by(
           applied, [&](const Expr& b) { return expr::depends_on_unknown(b, unknown); }, l.simplify_options())) {
    terms.push_back(coefficient * key);
  }
  return expr::sum(std::move(terms));
}

std::vector<Expr> pde_terms(const Expr& pde, const std::string& unknown) {
  struct Entry {
    int order;
    Expr key;
    Expr term;
  };
  std::vector<Entry> entries;
  const std::vector<Expr> terms = pde.is(Kind::sum) ? pde.operands() : std::vector<Expr>{pde};
  for (const auto& t : terms) {
    std::vector<Expr> key;
    int top = -1;
    const std::vector<Expr> factors = t.is(Kind::product) ? t.operands() : std::vector<Expr>{t};
    for (const auto& f : factors) {
      if (!expr::depends_on_unknown(f, unknown)) continue;
      key.push_back(f);
      const Expr b = expr::split_power(f).first;
      if (b.is(Kind::derivative) && b.name() == unknown) top = std::max(top, expr::order(b.index()));
    }
    // Reverse so the highest-order atom decides the comparison first.
    std::reverse(key.begin(), key.end());
    entries.push_back({top, expr::product(std::move(key)), t});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.order != b.order) return a.order > b.order;
    return expr::compare(a.key, b.key) < 0;
  });
  std::vector<Expr> out;
  for (auto& e : entries) out.push_back(std::move(e.term));
  return out;
}

Expr divide_common_factor(const Expr& pde, const std::string& unknown) {
  const Expr bare = expr::derivative(unknown);
  const auto groups =
      expr::collect_by(pde, [&](const Expr& b) { return expr::depends_on_unknown(b, unknown); });
  if (groups.empty()) return pde;

  auto bare_power = [&](const Expr& key) -> std::optional<Rational> {
    const std::vector<Expr> factors = key.is(Kind::product) ? key.operands() : std::vector<Expr>{key};
    for (const auto& f : factors) {
      auto [b, k] = expr::split_power(f);
      if (b == bare) {
        if (!k.is_constant()) return std::nullopt;
        return k.value();
      }
    }
    return Rational(0);
  };
  auto top_order = [&](const Expr& key) {
    int best = -1;
    const std::vector<Expr> factors = key.is(Kind::product) ? key.operands() : std::vector<Expr>{key};
    for (const auto& f : factors) {
      const Expr b = expr::split_power(f).first;
      if (b.is(Kind::derivative) && b.name() == unknown) best = std::max(best, expr::order(b.index()));
    }
    return best;
  };

  std::optional<Rational> lowest;
  for (const auto& [key, c] : groups) {
    auto p = bare_power(key);
    if (!p) return pde;
    lowest = lowest ? std::min(*lowest, *p) : *p;
  }
  const auto* lead = &groups.front();
  for (const auto& g : groups) {
    if (top_order(g.first) > top_order(lead->first)) lead = &g;
  }
  const Rational scale = expr::split_coefficient(lead->second).first;

  std::vector<Expr> terms;
  for (const auto& [key, c] : groups) {
    terms.push_back(expr::product({expr::constant(1 / scale), c, key, expr::power(bare, expr::constant(-*lowest))}));
  }
  return expr::sum(std::move(terms));
}

}  // namespace weiss::diffop
