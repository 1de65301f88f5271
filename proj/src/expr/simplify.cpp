#include "weiss/expr/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace weiss::expr {

namespace {

// base -> nonzero exponent
using Monomial = std::map<Expr, Rational, ExprLess>;

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
      if (int c = compare(ia->first, ib->first); c != 0) return c < 0;
      if (ia->second != ib->second) return ia->second < ib->second;
    }
    return ia == a.end() && ib != b.end();
  }
};

using Poly = std::map<Monomial, Rational, MonomialLess>;

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

// Multiplies base^e into a monomial, folding constant bases that reach an
// exactly representable power into the coefficient.
void multiply_factor(Monomial& m, Rational& c, const Expr& base, const Rational& e) {
  if (e == 0) return;
  Rational& slot = m[base];
  slot += e;
  if (slot == 0) {
    m.erase(base);
    return;
  }
  if (base.is_constant()) {
    if (auto exact = exact_power(base.value(), slot)) {
      c *= *exact;
      m.erase(base);
    }
  }
}

Expr monomial_expr(const Rational& c, const Monomial& m) {
  std::vector<Expr> factors;
  factors.reserve(m.size() + 1);
  factors.push_back(constant(c));
  for (const auto& [b, e] : m) factors.push_back(power(b, constant(e)));
  return product(std::move(factors));
}

Rational degree(const Monomial& m) {
  Rational d = 0;
  for (const auto& entry : m) d += entry.second;
  return d;
}

// Graded lexicographic monomial order used by exact division.
bool grlex_greater(const Monomial& a, const Monomial& b) {
  const Rational da = degree(a);
  const Rational db = degree(b);
  if (da != db) return da > db;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    const int c = compare(ia->first, ib->first);
    if (c == 0) {
      if (ia->second != ib->second) return ia->second > ib->second;
      ++ia;
      ++ib;
    } else {
      return c < 0;  // a carries a base that b lacks
    }
  }
  return ia != a.end();
}

const std::pair<const Monomial, Rational>& leading(const Poly& p) {
  auto best = p.begin();
  for (auto it = std::next(p.begin()); it != p.end(); ++it) {
    if (grlex_greater(it->first, best->first)) best = it;
  }
  return *best;
}

bool known_positive(const Expr& base, const Rational& e, const Assumptions& assume) {
  if (!is_integer(e)) return true;  // a fractional power already demands base > 0
  if (base.is_constant()) return base.value() > 0;
  if (base.is(Kind::variable) && assume.positive.count(base.name())) return true;
  if (base.is(Kind::function) && base.function() == Function::exp) return true;
  return !is_even_integer(e) && base.is(Kind::power) && base.exponent().is_constant() &&
         !is_integer(base.exponent().value());
}

class Simplifier {
 public:
  explicit Simplifier(const SimplifyOptions& options) : opt_(options) {}

  Poly expand(const Expr& e) {
    Poly p;
    switch (e.kind()) {
      case Kind::constant:
        if (!e.is_zero()) p.emplace(Monomial{}, e.value());
        return p;
      case Kind::variable:
      case Kind::derivative: return atom(e);
      case Kind::function: return atom(apply(e.function(), together(expand(e.argument()))));
      case Kind::sum: {
        for (const auto& t : e.operands()) {
          for (const auto& [m, c] : expand(t)) add_term(p, m, c);
        }
        return p;
      }
      case Kind::product: {
        p.emplace(Monomial{}, Rational(1));
        for (const auto& f : e.operands()) p = multiply(p, expand(f));
        return p;
      }
      case Kind::power: return expand_power(e);
    }
    return p;
  }

  Expr together(const Poly& p) {
    if (p.empty()) return integer(0);
    if (p.size() == 1) return monomial_expr(p.begin()->second, p.begin()->first);

    // Common denominator: most negative exponent of every base.
    std::map<Expr, Rational, ExprLess> lowest;
    for (const auto& [m, c] : p) {
      for (const auto& [b, e] : m) {
        if (e < 0) {
          auto [it, inserted] = lowest.emplace(b, e);
          if (!inserted) it->second = std::min(it->second, e);
        }
      }
    }
    Poly numerator;
    if (lowest.empty()) {
      numerator = p;
    } else {
      for (const auto& [m, c] : p) {
        Monomial adjusted = m;
        Rational coeff = c;
        for (const auto& [b, low] : lowest) multiply_factor(adjusted, coeff, b, -low);
        Poly term;
        Monomial kept;
        term.emplace(Monomial{}, coeff);
        for (const auto& [b, e] : adjusted) {
          if (b.is(Kind::sum) && is_integer(e) && e > 0) {
            term = multiply(term, power_poly(expand(b), e));
          } else {
            kept.emplace(b, e);
          }
        }
        term = multiply(term, Poly{{kept, Rational(1)}});
        for (const auto& [tm, tc] : term) add_term(numerator, tm, tc);
      }
    }
    if (numerator.empty()) return integer(0);

    // Cancel denominator sums that divide the numerator exactly.
    for (auto& [b, low] : lowest) {
      if (!b.is(Kind::sum)) continue;
      const Poly divisor = expand(b);
      while (low <= -1) {
        auto quotient = divide(numerator, divisor);
        if (!quotient) break;
        numerator = std::move(*quotient);
        low += 1;
      }
    }
    for (auto it = lowest.begin(); it != lowest.end();) {
      it = it->second == 0 ? lowest.erase(it) : std::next(it);
    }

    std::vector<Expr> factors;
    for (const auto& [b, low] : lowest) factors.push_back(power(b, constant(low)));

    // Common monomial factor and rational content of the numerator.
    Monomial common;
    if (numerator.size() > 1) {
      common = numerator.begin()->first;
      for (const auto& [m, c] : numerator) {
        for (auto it = common.begin(); it != common.end();) {
          auto found = m.find(it->first);
          if (found == m.end() || found->second <= 0 || it->second <= 0) {
            it = common.erase(it);
            continue;
          }
          it->second = std::min(it->second, found->second);
          ++it;
        }
      }
    }
    Rational content = 0;
    for (const auto& [m, c] : numerator) content = gcd(content, c);

    if (lowest.empty() && common.empty()) {
      std::vector<Expr> terms;
      for (const auto& [m, c] : numerator) terms.push_back(monomial_expr(c, m));
      return sum(std::move(terms));
    }

    std::vector<Expr> terms;
    for (const auto& [m, c] : numerator) {
      Monomial reduced = m;
      for (const auto& [b, e] : common) {
        auto it = reduced.find(b);
        it->second -= e;
        if (it->second == 0) reduced.erase(it);
      }
      terms.push_back(monomial_expr(c / content, reduced));
    }
    factors.push_back(constant(content));
    for (const auto& [b, e] : common) factors.push_back(power(b, constant(e)));
    factors.push_back(sum(std::move(terms)));
    return product(std::move(factors));
  }

 private:
  // Exact multivariate division; nullopt when a remainder is left or a
  // quotient term would need a negative exponent.
  std::optional<Poly> divide(Poly dividend, const Poly& divisor) {
    if (divisor.empty()) return std::nullopt;
    const auto& [lead_m, lead_c] = leading(divisor);
    for (const auto& entry : lead_m) {
      if (entry.second <= 0) return std::nullopt;
    }
    Poly quotient;
    std::size_t steps = 0;
    while (!dividend.empty()) {
      if (++steps > 4 * opt_.term_budget) return std::nullopt;
      const auto [m, c] = leading(dividend);
      Monomial q = m;
      for (const auto& [b, e] : lead_m) {
        auto it = q.find(b);
        if (it == q.end() || it->second < e) return std::nullopt;
        it->second -= e;
        if (it->second == 0) q.erase(it);
      }
      for (const auto& entry : q) {
        if (entry.second < 0) return std::nullopt;
      }
      const Rational qc = c / lead_c;
      add_term(quotient, q, qc);
      for (const auto& [dm, dc] : divisor) {
        Monomial prod = dm;
        Rational pc = -qc * dc;
        for (const auto& [b, e] : q) multiply_factor(prod, pc, b, e);
        add_term(dividend, prod, pc);
      }
    }
    return quotient;
  }

  Poly atom(const Expr& e) {
    Poly p;
    if (e.is_constant()) {
      if (!e.is_zero()) p.emplace(Monomial{}, e.value());
      return p;
    }
    p.emplace(Monomial{{e, Rational(1)}}, Rational(1));
    return p;
  }

  // Monomial view of an already-normalized expression, without expanding.
  Poly absorb(const Expr& e) {
    if (e.is(Kind::sum)) {
      Poly p;
      for (const auto& t : e.operands()) {
        for (const auto& [m, c] : absorb(t)) add_term(p, m, c);
      }
      return p;
    }
    Rational c = 1;
    Monomial m;
    const std::vector<Expr> factors = e.is(Kind::product) ? e.operands() : std::vector<Expr>{e};
    for (const auto& f : factors) {
      if (f.is_constant()) {
        c *= f.value();
        continue;
      }
      auto [b, k] = split_power(f);
      if (k.is_constant()) {
        multiply_factor(m, c, b, k.value());
      } else {
        multiply_factor(m, c, f, Rational(1));
      }
    }
    Poly p;
    if (c != 0) p.emplace(std::move(m), c);
    return p;
  }

  Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    if (a.size() * b.size() > opt_.term_budget) {
      return absorb(product({together(a), together(b)}));
    }
    Poly out;
    for (const auto& [ma, ca] : a) {
      for (const auto& [mb, cb] : b) {
        Monomial m = ma;
        Rational c = ca * cb;
        for (const auto& [base, e] : mb) multiply_factor(m, c, base, e);
        add_term(out, m, c);
      }
    }
    return out;
  }

  Poly power_poly(const Poly& p, const Rational& k) {
    const auto n = to_int64(k);
    Poly out{{Monomial{}, Rational(1)}};
    for (std::int64_t i = 0; i < *n; ++i) out = multiply(out, p);
    return out;
  }

  Poly expand_power(const Expr& e) {
    const Expr& k = e.exponent();
    if (!k.is_constant()) {
      return atom(power(together(expand(e.base())), together(expand(k))));
    }
    const Rational& kv = k.value();
    Poly base = expand(e.base());
    if (base.empty()) {
      if (kv > 0) return {};
      return atom(power(integer(0), k));
    }
    if (base.size() > 1) {
      if (is_integer(kv) && kv > 0) {
        const double estimate = std::pow(static_cast<double>(base.size()), to_double(kv));
        if (estimate <= static_cast<double>(opt_.term_budget)) return power_poly(base, kv);
      }
      base = absorb(together(base));
      if (base.size() > 1) return absorb(power(together(base), k));
    }
    return monomial_power(base.begin()->second, base.begin()->first, kv);
  }

  Poly monomial_power(const Rational& c, const Monomial& m, const Rational& k) {
    Poly p;
    if (is_integer(k)) {
      Rational coeff = pow(c, *to_int64(k));
      Monomial out;
      for (const auto& [b, e] : m) multiply_factor(out, coeff, b, e * k);
      p.emplace(std::move(out), coeff);
      return p;
    }
    Rational coeff = 1;
    Monomial out;
    std::vector<Expr> grouped;
    if (c > 0) {
      multiply_factor(out, coeff, constant(c), k);
    } else {
      grouped.push_back(constant(c));
    }
    std::vector<std::pair<Expr, Rational>> unknown_sign;
    for (const auto& [b, e] : m) {
      if (known_positive(b, e, opt_.assumptions)) {
        multiply_factor(out, coeff, b, e * k);
      } else {
        unknown_sign.emplace_back(b, e);
      }
    }
    if (grouped.empty() && unknown_sign.size() == 1 && !is_even_integer(unknown_sign.front().second)) {
      multiply_factor(out, coeff, unknown_sign.front().first, unknown_sign.front().second * k);
    } else if (!grouped.empty() || !unknown_sign.empty()) {
      for (const auto& [b, e] : unknown_sign) grouped.push_back(power(b, constant(e)));
      for (const auto& [gm, gc] : absorb(power(product(std::move(grouped)), constant(k)))) {
        Monomial merged = out;
        Rational merged_c = coeff * gc;
        for (const auto& [b, e] : gm) multiply_factor(merged, merged_c, b, e);
        add_term(p, merged, merged_c);
      }
      return p;
    }
    p.emplace(std::move(out), coeff);
    return p;
  }

  const SimplifyOptions& opt_;
};

}  // namespace

Expr simplify(const Expr& e, const SimplifyOptions& options) {
  Simplifier s(options);
  return s.together(s.expand(e));
}

Expr expand(const Expr& e, const SimplifyOptions& options) {
  Simplifier s(options);
  std::vector<Expr> terms;
  for (const auto& [m, c] : s.expand(e)) terms.push_back(monomial_expr(c, m));
  return sum(std::move(terms));
}

std::vector<std::pair<Expr, Expr>> collect_by(const Expr& e, const std::function<bool(const Expr&)>& is_key,
                                              const SimplifyOptions& options) {
  Simplifier s(options);
  std::map<Expr, std::vector<Expr>, ExprLess> groups;
  for (const auto& [m, c] : s.expand(e)) {
    std::vector<Expr> key_factors;
    std::vector<Expr> rest{constant(c)};
    for (const auto& [b, k] : m) {
      (is_key(b) ? key_factors : rest).push_back(power(b, constant(k)));
    }
    groups[product(std::move(key_factors))].push_back(product(std::move(rest)));
  }
  std::vector<std::pair<Expr, Expr>> out;
  for (auto& [key, parts] : groups) {
    Expr coefficient = simplify(sum(std::move(parts)), options);
    if (!coefficient.is_zero()) out.emplace_back(key, coefficient);
  }
  return out;
}

}  // namespace weiss::expr
