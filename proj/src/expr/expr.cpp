#include "weiss/expr/expr.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "weiss/errors.hpp"

namespace weiss::expr {

class Node {
 public:
  Kind kind = Kind::constant;
  std::size_t hash = 0;
  Rational value;
  std::string name;
  // Derivative atoms: multi-index and the cached jet name used for ordering.
  MultiIndex index;
  std::string label;
  Function fn = Function::exp;
  std::vector<Expr> args;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int kind_rank(Kind k) {
  switch (k) {
    case Kind::constant: return 0;
    case Kind::variable: return 1;
    case Kind::derivative: return 2;
    case Kind::function: return 3;
    case Kind::sum: return 4;
    case Kind::product: return 5;
    case Kind::power: return 6;
  }
  return 7;
}

}  // namespace

class NodeFactory {
 public:
  static Expr make(Node node) {
    std::size_t h = std::hash<int>{}(static_cast<int>(node.kind));
    switch (node.kind) {
      case Kind::constant: h = mix(h, hash_value(node.value)); break;
      case Kind::variable: h = mix(h, std::hash<std::string>{}(node.name)); break;
      case Kind::derivative: h = mix(h, std::hash<std::string>{}(node.label)); break;
      case Kind::function: h = mix(h, static_cast<std::size_t>(node.fn)); break;
      default: break;
    }
    for (const auto& a : node.args) h = mix(h, a.hash());
    node.hash = h;
    return Expr(std::make_shared<const Node>(std::move(node)));
  }

  static Expr raw(Kind kind, std::vector<Expr> args) {
    Node n;
    n.kind = kind;
    n.args = std::move(args);
    return make(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = [] {
    Node n;
    n.kind = Kind::constant;
    n.value = 0;
    return NodeFactory::make(std::move(n));
  }();
  return z;
}

Expr raw_power(const Expr& base, const Expr& exponent) { return NodeFactory::raw(Kind::power, {base, exponent}); }

// Compare two (base, exponent) pairs: base first, then exponent.
int compare_factor(const Expr& a, const Expr& b) {
  auto [ba, ea] = split_power(a);
  auto [bb, eb] = split_power(b);
  if (int c = compare(ba, bb); c != 0) return c;
  return compare(ea, eb);
}

std::vector<Expr> factor_list(const Expr& rest) {
  if (rest.is(Kind::product)) return rest.operands();
  return {rest};
}

// Ordering of the non-coefficient parts of sum terms.
int compare_term_rest(const Expr& a, const Expr& b) {
  const auto fa = factor_list(a);
  const auto fb = factor_list(b);
  const std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare_factor(fa[i], fb[i]); c != 0) return c;
  }
  if (fa.size() != fb.size()) return fa.size() < fb.size() ? -1 : 1;
  return 0;
}

Expr with_coefficient(const Rational& c, const Expr& rest) {
  if (c == 1) return rest;
  if (c == 0) return zero_expr();
  if (rest.is_one()) return constant(c);
  std::vector<Expr> args;
  args.push_back(constant(c));
  if (rest.is(Kind::product)) {
    args.insert(args.end(), rest.operands().begin(), rest.operands().end());
  } else {
    args.push_back(rest);
  }
  return NodeFactory::raw(Kind::product, std::move(args));
}

// Extracts the positive rational content of a sum (and the sign of its
// leading term when `with_sign`), returning (content, primitive sum).
std::pair<Rational, Expr> sum_content(const Expr& s, bool with_sign) {
  Rational g = 0;
  for (const auto& t : s.operands()) g = gcd(g, split_coefficient(t).first);
  if (g == 0) return {Rational(1), s};
  if (with_sign && split_coefficient(s.operands().front()).first < 0) g = -g;
  if (g == 1) return {Rational(1), s};
  std::vector<Expr> terms;
  terms.reserve(s.operands().size());
  for (const auto& t : s.operands()) {
    auto [c, rest] = split_coefficient(t);
    terms.push_back(with_coefficient(c / g, rest));
  }
  return {g, sum(std::move(terms))};
}

Expr constant_power(const Rational& base, const Expr& exponent) {
  if (exponent.is_constant()) {
    if (auto exact = exact_power(base, exponent.value())) return constant(*exact);
  }
  return raw_power(constant(base), exponent);
}

}  // namespace

// ---- Expr accessors -------------------------------------------------------

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(int value) : Expr(constant(Rational(value))) {}
Expr::Expr(const Rational& value) : Expr(constant(value)) {}

Kind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_zero() const noexcept { return node_->kind == Kind::constant && node_->value == 0; }
bool Expr::is_one() const noexcept { return node_->kind == Kind::constant && node_->value == 1; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const MultiIndex& Expr::index() const { return node_->index; }
Function Expr::function() const { return node_->fn; }
const std::vector<Expr>& Expr::operands() const { return node_->args; }
const Expr& Expr::base() const { return node_->args.at(0); }
const Expr& Expr::exponent() const { return node_->args.at(1); }
const Expr& Expr::argument() const { return node_->args.at(0); }
std::size_t Expr::hash() const noexcept { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

std::string_view function_name(Function f) {
  switch (f) {
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::sqrt: return "sqrt";
  }
  return "?";
}

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  const int ra = kind_rank(a.kind());
  const int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Kind::constant:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Kind::variable: return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::derivative: {
      const int c = a.node()->label.compare(b.node()->label);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::function:
      if (a.function() != b.function()) return a.function() < b.function() ? -1 : 1;
      return compare(a.argument(), b.argument());
    case Kind::sum:
    case Kind::product:
    case Kind::power: {
      const auto& x = a.operands();
      const auto& y = b.operands();
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (int c = compare(x[i], y[i]); c != 0) return c;
      }
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

// ---- builders -------------------------------------------------------------

Expr constant(const Rational& value) {
  Node n;
  n.kind = Kind::constant;
  n.value = value;
  return NodeFactory::make(std::move(n));
}

Expr integer(std::int64_t value) { return constant(Rational(value)); }

Expr rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidArgument("rational constant with zero denominator");
  return constant(Rational(num, den));
}

Expr variable(std::string name) {
  Node n;
  n.kind = Kind::variable;
  n.name = std::move(name);
  return NodeFactory::make(std::move(n));
}

std::string jet_name(const std::string& unknown, const MultiIndex& index) {
  std::string out = unknown;
  bool first = true;
  for (const auto& [var, count] : index) {
    for (int i = 0; i < count; ++i) {
      if (first) out += '_';
      first = false;
      out += var;
    }
  }
  return out;
}

int order(const MultiIndex& index) {
  int total = 0;
  for (const auto& entry : index) total += entry.second;
  return total;
}

Expr derivative(std::string unknown, MultiIndex index) {
  for (auto it = index.begin(); it != index.end();) {
    if (it->second < 0) throw InvalidArgument("negative derivative order for " + unknown);
    it = it->second == 0 ? index.erase(it) : std::next(it);
  }
  Node n;
  n.kind = Kind::derivative;
  n.label = jet_name(unknown, index);
  n.name = std::move(unknown);
  n.index = std::move(index);
  return NodeFactory::make(std::move(n));
}

Expr apply(Function f, const Expr& argument) {
  switch (f) {
    case Function::sqrt: return power(argument, rational(1, 2));
    case Function::exp:
      if (argument.is_zero()) return integer(1);
      if (argument.is(Kind::function) && argument.function() == Function::log) return argument.argument();
      break;
    case Function::log:
      if (argument.is_one()) return integer(0);
      if (argument.is(Kind::function) && argument.function() == Function::exp) return argument.argument();
      break;
    case Function::sin:
      if (argument.is_zero()) return integer(0);
      break;
    case Function::cos:
      if (argument.is_zero()) return integer(1);
      break;
  }
  Node n;
  n.kind = Kind::function;
  n.fn = f;
  n.args = {argument};
  return NodeFactory::make(std::move(n));
}

Expr sqrt(const Expr& e) { return apply(Function::sqrt, e); }
Expr exp(const Expr& e) { return apply(Function::exp, e); }
Expr log(const Expr& e) { return apply(Function::log, e); }
Expr sin(const Expr& e) { return apply(Function::sin, e); }
Expr cos(const Expr& e) { return apply(Function::cos, e); }

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_constant()) return {term.value(), integer(1)};
  if (term.is(Kind::product) && term.operands().front().is_constant()) {
    const auto& ops = term.operands();
    if (ops.size() == 2) return {ops[0].value(), ops[1]};
    return {ops[0].value(), NodeFactory::raw(Kind::product, std::vector<Expr>(ops.begin() + 1, ops.end()))};
  }
  return {Rational(1), term};
}

std::pair<Expr, Expr> split_power(const Expr& factor) {
  if (factor.is(Kind::power)) return {factor.base(), factor.exponent()};
  return {factor, integer(1)};
}

Expr sum(std::vector<Expr> terms) {
  Rational constant_part = 0;
  std::map<Expr, Rational, ExprLess> collected;
  std::vector<Expr> stack(terms.rbegin(), terms.rend());
  while (!stack.empty()) {
    Expr t = std::move(stack.back());
    stack.pop_back();
    if (t.is(Kind::sum)) {
      for (auto it = t.operands().rbegin(); it != t.operands().rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (t.is_constant()) {
      constant_part += t.value();
      continue;
    }
    auto [c, rest] = split_coefficient(t);
    collected[rest] += c;
  }
  std::vector<std::pair<Expr, Rational>> kept;
  for (auto& [rest, c] : collected) {
    if (c != 0) kept.emplace_back(rest, c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return compare_term_rest(a.first, b.first) < 0; });
  std::vector<Expr> out;
  if (constant_part != 0) out.push_back(constant(constant_part));
  for (auto& [rest, c] : kept) out.push_back(with_coefficient(c, rest));
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out.front();
  return NodeFactory::raw(Kind::sum, std::move(out));
}

Expr product(std::vector<Expr> factors) {
  if (factors.size() == 1 && !factors.front().is(Kind::product)) return factors.front();
  Rational coefficient = 1;
  std::map<Expr, std::vector<Expr>, ExprLess> exponents;
  std::vector<Expr> stack(factors.rbegin(), factors.rend());
  while (!stack.empty()) {
    Expr f = std::move(stack.back());
    stack.pop_back();
    if (f.is(Kind::product)) {
      for (auto it = f.operands().rbegin(); it != f.operands().rend(); ++it) stack.push_back(*it);
      continue;
    }
    if (f.is_constant()) {
      coefficient *= f.value();
      continue;
    }
    auto [b, e] = split_power(f);
    if (b.is(Kind::sum) && e.is_constant()) {
      auto [k, primitive] = sum_content(b, is_integer(e.value()));
      if (k != 1) {
        if (auto i = to_int64(e.value())) {
          coefficient *= pow(k, *i);
        } else {
          exponents[constant(k)].push_back(e);
        }
        b = primitive;
      }
    }
    exponents[b].push_back(e);
  }
  if (coefficient == 0) return zero_expr();

  std::vector<Expr> out;
  bool needs_reflatten = false;
  for (auto& [b, es] : exponents) {
    Expr e = sum(es);
    if (e.is_zero()) continue;
    if (b.is_constant()) {
      Expr folded = constant_power(b.value(), e);
      if (folded.is_constant()) {
        coefficient *= folded.value();
        continue;
      }
      out.push_back(folded);
      continue;
    }
    Expr f = es.size() == 1 ? (e.is_one() ? b : raw_power(b, e)) : power(b, e);
    if (f.is(Kind::product) || f.is_constant()) needs_reflatten = true;
    out.push_back(std::move(f));
  }
  if (coefficient == 0) return zero_expr();
  if (needs_reflatten) {
    out.push_back(constant(coefficient));
    return product(std::move(out));
  }
  std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return compare_factor(a, b) < 0; });
  if (out.empty()) return constant(coefficient);
  if (coefficient == 1 && out.size() == 1) return out.front();
  if (coefficient != 1) out.insert(out.begin(), constant(coefficient));
  return NodeFactory::raw(Kind::product, std::move(out));
}

Expr power(const Expr& base, const Expr& exponent) {
  if (!exponent.is_constant()) {
    if (base.is_one()) return base;
    return raw_power(base, exponent);
  }
  const Rational& k = exponent.value();
  if (k == 0) return integer(1);
  if (k == 1) return base;
  const auto int_k = to_int64(k);

  switch (base.kind()) {
    case Kind::constant: {
      const Rational& v = base.value();
      if (v == 1) return base;
      if (v == 0 && k > 0) return base;
      if (auto exact = exact_power(v, k)) return constant(*exact);
      return raw_power(base, exponent);
    }
    case Kind::power: {
      const Expr& inner = base.exponent();
      if (int_k) return power(base.base(), product({inner, exponent}));
      if (inner.is_constant() && (!is_integer(inner.value()) || !is_even_integer(inner.value()))) {
        return power(base.base(), constant(inner.value() * k));
      }
      return raw_power(base, exponent);
    }
    case Kind::product: {
      if (int_k) {
        std::vector<Expr> parts;
        for (const auto& f : base.operands()) parts.push_back(power(f, exponent));
        return product(std::move(parts));
      }
      // Positive constant factors (2, 2^(1/2), ...) may be pulled out of a
      // fractional power; the remaining factors stay together.
      std::vector<Expr> pulled;
      std::vector<Expr> kept;
      for (const auto& f : base.operands()) {
        const bool positive_constant =
            (f.is_constant() && f.value() > 0) ||
            (f.is(Kind::power) && f.base().is_constant() && f.base().value() > 0 && f.exponent().is_constant());
        (positive_constant ? pulled : kept).push_back(f);
      }
      if (pulled.empty()) return raw_power(base, exponent);
      for (auto& f : pulled) f = f.is_constant() ? constant_power(f.value(), exponent) : power(f, exponent);
      pulled.push_back(power(product(std::move(kept)), exponent));
      return product(std::move(pulled));
    }
    case Kind::sum: {
      auto [c, primitive] = sum_content(base, int_k.has_value());
      if (c == 1) return raw_power(base, exponent);
      return product({constant_power(c, exponent), raw_power(primitive, exponent)});
    }
    default: return raw_power(base, exponent);
  }
}

Expr pow(const Expr& base, const Rational& exponent) { return power(base, constant(exponent)); }

Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return sum({a, product({integer(-1), b})}); }
Expr operator-(const Expr& a) { return product({integer(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, integer(-1))}); }

// ---- queries ----------------------------------------------------------------

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr cur = std::move(stack.back());
    stack.pop_back();
    switch (cur.kind()) {
      case Kind::constant: break;
      case Kind::variable:
      case Kind::derivative: out.insert(cur.name()); break;
      default:
        for (const auto& a : cur.operands()) stack.push_back(a);
    }
  }
  return out;
}

bool depends_on_unknown(const Expr& e, const std::string& unknown) {
  if (e.is(Kind::derivative)) return e.name() == unknown;
  if (e.is_constant() || e.is(Kind::variable)) return false;
  return std::any_of(e.operands().begin(), e.operands().end(),
                     [&](const Expr& a) { return depends_on_unknown(a, unknown); });
}

bool depends_on(const Expr& e, const std::string& name) {
  switch (e.kind()) {
    case Kind::constant: return false;
    case Kind::variable: return e.name() == name;
    case Kind::derivative: return true;
    default:
      return std::any_of(e.operands().begin(), e.operands().end(),
                         [&](const Expr& a) { return depends_on(a, name); });
  }
}

// ---- differentiation ---------------------------------------------------------

namespace {

class Differentiator {
 public:
  explicit Differentiator(const std::string& var) : var_(var) {}

  Expr operator()(const Expr& e) {
    if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second;
    Expr result = compute(e);
    cache_.emplace(e.node(), result);
    keep_.push_back(e);
    return result;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::constant: return integer(0);
      case Kind::variable: return integer(e.name() == var_ ? 1 : 0);
      case Kind::derivative: {
        MultiIndex index = e.index();
        ++index[var_];
        return derivative(e.name(), std::move(index));
      }
      case Kind::function: {
        const Expr& u = e.argument();
        Expr du = (*this)(u);
        if (du.is_zero()) return du;
        switch (e.function()) {
          case Function::exp: return product({e, du});
          case Function::log: return du / u;
          case Function::sin: return product({cos(u), du});
          case Function::cos: return product({integer(-1), sin(u), du});
          case Function::sqrt: return product({rational(1, 2), power(u, rational(-1, 2)), du});
        }
        return integer(0);
      }
      case Kind::sum: {
        std::vector<Expr> terms;
        for (const auto& t : e.operands()) terms.push_back((*this)(t));
        return sum(std::move(terms));
      }
      case Kind::product: {
        const auto& ops = e.operands();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < ops.size(); ++i) {
          Expr di = (*this)(ops[i]);
          if (di.is_zero()) continue;
          std::vector<Expr> factors;
          factors.reserve(ops.size());
          for (std::size_t j = 0; j < ops.size(); ++j) factors.push_back(j == i ? di : ops[j]);
          terms.push_back(product(std::move(factors)));
        }
        return sum(std::move(terms));
      }
      case Kind::power: {
        const Expr& b = e.base();
        const Expr& k = e.exponent();
        Expr db = (*this)(b);
        Expr dk = (*this)(k);
        if (dk.is_zero()) {
          if (db.is_zero()) return integer(0);
          // power rule: k * b^(k-1) * b'
          return product({k, power(b, sum({k, integer(-1)})), db});
        }
        // b^k * (k' log b + k b'/b)
        return product({e, sum({product({dk, log(b)}), product({k, db, power(b, integer(-1))})})});
      }
    }
    return integer(0);
  }

  const std::string& var_;
  std::unordered_map<const Node*, Expr> cache_;
  std::vector<Expr> keep_;
};

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
  Differentiator d(var);
  return d(e);
}

Expr differentiate(const Expr& e, const MultiIndex& index) {
  Expr out = e;
  for (const auto& [var, count] : index) {
    for (int i = 0; i < count; ++i) out = differentiate(out, var);
  }
  return out;
}

// ---- substitution ------------------------------------------------------------

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  std::unordered_map<const Node*, Expr> cache;
  std::map<std::string, Expr> jets;
  std::vector<Expr> keep;

  std::function<Expr(const Expr&)> go = [&](const Expr& cur) -> Expr {
    if (auto it = cache.find(cur.node()); it != cache.end()) return it->second;
    Expr result = cur;
    switch (cur.kind()) {
      case Kind::constant: break;
      case Kind::variable: {
        if (auto it = bindings.find(cur.name()); it != bindings.end()) result = it->second;
        break;
      }
      case Kind::derivative: {
        auto it = bindings.find(cur.name());
        if (it == bindings.end()) break;
        const std::string key = cur.node()->label;
        auto jt = jets.find(key);
        if (jt == jets.end()) jt = jets.emplace(key, differentiate(it->second, cur.index())).first;
        result = jt->second;
        break;
      }
      case Kind::function: result = apply(cur.function(), go(cur.argument())); break;
      case Kind::sum:
      case Kind::product: {
        std::vector<Expr> parts;
        parts.reserve(cur.operands().size());
        for (const auto& a : cur.operands()) parts.push_back(go(a));
        result = cur.is(Kind::sum) ? sum(std::move(parts)) : product(std::move(parts));
        break;
      }
      case Kind::power: result = power(go(cur.base()), go(cur.exponent())); break;
    }
    cache.emplace(cur.node(), result);
    keep.push_back(cur);
    return result;
  };
  return go(e);
}

}  // namespace weiss::expr
