#include "weiss/expr/emit.hpp"

#include <array>
#include <cctype>
#include <vector>

namespace weiss::expr {

namespace {

bool negative_exponent(const Expr& f) {
  return f.is(Kind::power) && f.exponent().is_constant() && f.exponent().value() < 0;
}

std::string latex_name(const std::string& name) {
  static constexpr std::array<const char*, 24> greek = {
      "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta",     "theta", "iota", "kappa", "lambda", "mu",
      "nu",    "xi",   "pi",    "rho",   "sigma",   "tau",  "upsilon", "phi",   "chi",  "psi",   "omega",  "Phi"};
  for (const char* g : greek) {
    if (name == g) return std::string("\\") + g;
  }
  std::size_t split = name.size();
  while (split > 0 && std::isdigit(static_cast<unsigned char>(name[split - 1]))) --split;
  if (split > 0 && split < name.size()) return latex_name(name.substr(0, split)) + "_{" + name.substr(split) + "}";
  return name;
}

class Renderer {
 public:
  explicit Renderer(Format format) : latex_(format == Format::latex) {}

  std::string render(const Expr& e, bool top) {
    switch (e.kind()) {
      case Kind::constant: return constant_text(e.value());
      case Kind::variable: return latex_ ? latex_name(e.name()) : e.name();
      case Kind::derivative: return derivative_text(e);
      case Kind::function: return function_text(e);
      case Kind::sum: return sum_text(e, top);
      case Kind::product: return product_text(e);
      case Kind::power:
        if (negative_exponent(e)) return product_text(e);
        return power_text(e);
    }
    return "";
  }

  std::string render_terms(const std::vector<Expr>& terms) { return terms_text(terms, true); }

 private:
  std::string constant_text(const Rational& q) const {
    if (!latex_ || is_integer(q)) return to_string(q);
    const std::string sign = q < 0 ? "-" : "";
    return sign + "\\frac{" + numerator(abs(q)).str() + "}{" + denominator(q).str() + "}";
  }

  std::string derivative_text(const Expr& e) const {
    if (!latex_) return jet_name(e.name(), e.index());
    std::string out = latex_name(e.name());
    if (e.index().empty()) return out;
    const std::string full = jet_name(e.name(), e.index());
    return out + "_{" + full.substr(e.name().size() + 1) + "}";
  }

  std::string function_text(const Expr& e) {
    const std::string name(function_name(e.function()));
    const std::string arg = render(e.argument(), false);
    if (latex_) return "\\" + name + "\\left(" + arg + "\\right)";
    return name + "(" + arg + ")";
  }

  std::string paren(const std::string& s) const { return latex_ ? "\\left(" + s + "\\right)" : "(" + s + ")"; }

  std::string sum_text(const Expr& e, bool top) { return terms_text(e.operands(), top); }

  std::string terms_text(const std::vector<Expr>& terms, bool top) {
    if (terms.empty()) return "0";
    const bool spaced = top || latex_;
    std::string out;
    bool first = true;
    for (const auto& t : terms) {
      const bool neg = split_coefficient(t).first < 0;
      if (first) {
        out += render(t, false);
      } else {
        const Expr shown = neg ? product({integer(-1), t}) : t;
        out += spaced ? (neg ? " - " : " + ") : (neg ? "-" : "+");
        // negating -(a-b) yields a bare sum again
        out += shown.is(Kind::sum) ? paren(render(shown, false)) : render(shown, false);
      }
      first = false;
    }
    return out;
  }

  // Factor inside a product numerator or denominator.
  std::string factor_text(const Expr& f) {
    if (f.is(Kind::sum)) return paren(render(f, false));
    return render(f, false);
  }

  std::string product_text(const Expr& e) {
    auto [c, rest] = split_coefficient(e);
    std::vector<Expr> factors = rest.is(Kind::product) ? rest.operands() : std::vector<Expr>{rest};
    if (rest.is_one()) factors.clear();
    std::vector<Expr> num_factors;
    std::vector<Expr> den_factors;
    for (const auto& f : factors) {
      if (negative_exponent(f)) {
        den_factors.push_back(power(f.base(), constant(-f.exponent().value())));
      } else {
        num_factors.push_back(f);
      }
    }
    // A lone sum on either side of \frac needs no brackets.
    const auto texts = [&](const std::vector<Expr>& fs, bool alone) {
      std::vector<std::string> out;
      for (const auto& f : fs) out.push_back(alone && fs.size() == 1 ? render(f, false) : factor_text(f));
      return out;
    };
    const bool fraction = latex_ && !den_factors.empty();
    std::vector<std::string> num = texts(num_factors, fraction && numerator(abs(c)) == 1);
    std::vector<std::string> den = texts(den_factors, fraction && denominator(c) == 1);
    const std::string sign = c < 0 ? "-" : "";
    const Rational mag = abs(c);
    if (latex_) {
      if (mag != 1 || num.empty()) {
        if (numerator(mag) != 1 || num.empty()) num.insert(num.begin(), numerator(mag).str());
      }
      if (denominator(mag) != 1) den.insert(den.begin(), denominator(mag).str());
      const std::string n = join(num, " ");
      if (den.empty()) return sign + n;
      return sign + "\\frac{" + n + "}{" + join(den, " ") + "}";
    }
    if (mag != 1) num.insert(num.begin(), to_string(mag));
    std::string out = sign + (num.empty() ? "1" : join(num, "*"));
    if (den.empty()) return out;
    std::string d = den.size() == 1 ? den.front() : "(" + join(den, "*") + ")";
    // keep "2/3"-style rational literals from forming across the slash
    if (std::isdigit(static_cast<unsigned char>(out.back())) && std::isdigit(static_cast<unsigned char>(d.front()))) {
      d = "(" + d + ")";
    }
    return out + "/" + d;
  }

  std::string power_text(const Expr& e) {
    const Expr& b = e.base();
    const Expr& k = e.exponent();
    if (latex_ && k.is_constant() && k.value() == Rational(1, 2)) return "\\sqrt{" + render(b, false) + "}";
    std::string base = render(b, false);
    const bool wrap_base = b.is(Kind::sum) || b.is(Kind::product) || b.is(Kind::power) ||
                           (b.is_constant() && (b.value() < 0 || !is_integer(b.value())));
    if (wrap_base) base = paren(base);
    std::string exponent;
    if (k.is_constant()) {
      exponent = to_string(k.value());
      if (latex_) return base + "^{" + exponent + "}";
      if (k.value() < 0 || !is_integer(k.value())) exponent = "(" + exponent + ")";
    } else {
      exponent = render(k, false);
      if (latex_) return base + "^{" + exponent + "}";
      if (!(k.is(Kind::variable) || k.is(Kind::derivative) || k.is(Kind::function))) exponent = "(" + exponent + ")";
    }
    return base + "^" + exponent;
  }

  static std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i > 0) out += sep;
      out += parts[i];
    }
    return out;
  }

  bool latex_;
};

}  // namespace

std::string emit_sum(const std::vector<Expr>& terms, Format format) {
  Renderer r(format);
  return r.render_terms(terms);
}

std::string emit(const Expr& e, Format format) {
  Renderer r(format);
  return r.render(e, true);
}

}  // namespace weiss::expr
