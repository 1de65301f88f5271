#include "weiss/expr/evaluate.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "weiss/errors.hpp"

namespace weiss::expr {

namespace {

using Reason = EvaluationError::Reason;

class Evaluator {
 public:
  explicit Evaluator(const Assignment& a) : a_(a) {}

  double operator()(const Expr& e) {
    if (e.is_constant()) return to_double(e.value());
    if (auto it = cache_.find(e.node()); it != cache_.end()) return it->second;
    const double v = compute(e);
    cache_.emplace(e.node(), v);
    return v;
  }

 private:
  double compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::constant: return to_double(e.value());
      case Kind::variable: {
        auto it = a_.values.find(e.name());
        if (it == a_.values.end()) throw EvaluationError(Reason::missing_symbol, "no value for symbol '" + e.name() + "'");
        return it->second;
      }
      case Kind::derivative: {
        if (auto it = a_.unknowns.find(e.name()); it != a_.unknowns.end()) {
          keep_.push_back(differentiate(it->second, e.index()));
          return (*this)(keep_.back());
        }
        const std::string key = jet_name(e.name(), e.index());
        auto it = a_.values.find(key);
        if (it == a_.values.end()) throw EvaluationError(Reason::missing_symbol, "no value or closed form for '" + key + "'");
        return it->second;
      }
      case Kind::function: {
        const double u = (*this)(e.argument());
        switch (e.function()) {
          case Function::exp: return checked(std::exp(u));
          case Function::log:
            if (u <= 0.0) throw EvaluationError(Reason::log_domain, "logarithm of a non-positive value");
            return std::log(u);
          case Function::sin: return std::sin(u);
          case Function::cos: return std::cos(u);
          case Function::sqrt:
            if (u <= 0.0) throw EvaluationError(Reason::non_positive_base, "square root of a non-positive value");
            return std::sqrt(u);
        }
        return 0.0;
      }
      case Kind::sum: {
        double total = 0.0;
        for (const auto& t : e.operands()) total += (*this)(t);
        return total;
      }
      case Kind::product: {
        double total = 1.0;
        for (const auto& f : e.operands()) total *= (*this)(f);
        return total;
      }
      case Kind::power: return power(e);
    }
    return 0.0;
  }

  double power(const Expr& e) {
    const double b = (*this)(e.base());
    const Expr& k = e.exponent();
    if (k.is_constant() && is_integer(k.value())) {
      const double kd = to_double(k.value());
      if (b == 0.0 && kd < 0) throw EvaluationError(Reason::division_by_zero, "division by zero");
      return checked(std::pow(b, kd));
    }
    if (b <= 0.0) throw EvaluationError(Reason::non_positive_base, "non-positive base under a fractional power");
    return checked(std::pow(b, (*this)(k)));
  }

  static double checked(double v) {
    if (!std::isfinite(v)) throw EvaluationError(Reason::non_finite, "non-finite intermediate value");
    return v;
  }

  const Assignment& a_;
  std::unordered_map<const Node*, double> cache_;
  // Resolved derivatives must outlive the cache entries keyed by their nodes.
  std::vector<Expr> keep_;
};

}  // namespace

double evaluate(const Expr& e, const Assignment& a) {
  Evaluator ev(a);
  return ev(e);
}

double term_scale(const Expr& e, const Assignment& a) {
  Evaluator ev(a);
  if (e.is(Kind::sum)) {
    double scale = 0.0;
    for (const auto& t : e.operands()) scale = std::max(scale, std::abs(ev(t)));
    return scale;
  }
  if (e.is(Kind::product)) {
    const Expr* inner = nullptr;
    double rest = 1.0;
    for (const auto& f : e.operands()) {
      if (f.is(Kind::sum) && inner == nullptr) {
        inner = &f;
      } else {
        rest *= ev(f);
      }
    }
    if (inner != nullptr) {
      double scale = 0.0;
      for (const auto& t : inner->operands()) scale = std::max(scale, std::abs(ev(t)));
      return std::abs(rest) * scale;
    }
  }
  return std::abs(ev(e));
}

Expr resolve_unknowns(const Expr& e, const Assignment& a) {
  if (a.unknowns.empty()) return e;
  return substitute(e, a.unknowns);
}

}  // namespace weiss::expr
