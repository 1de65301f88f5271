#include "weiss/expr/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "weiss/errors.hpp"

namespace weiss::expr {

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string text;
};

std::string describe(Tok t) {
  switch (t) {
    case Tok::number: return "number";
    case Tok::ident: return "identifier";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::slash: return "'/'";
    case Tok::caret: return "'^'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::end: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto digit = [&](std::size_t j) { return j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])); };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (digit(i) || (c == '.' && digit(i + 1))) {
      while (digit(i)) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (digit(i)) ++i;
      } else if (i < text.size() && text[i] == '/' && digit(i + 1)) {
        ++i;
        while (digit(i)) ++i;
      }
      out.push_back({Tok::number, start, std::string(text.substr(start, i - start))});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      out.push_back({Tok::ident, start, std::string(text.substr(start, i - start))});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::plus; break;
      case '-': kind = Tok::minus; break;
      case '*': kind = Tok::star; break;
      case '/': kind = Tok::slash; break;
      case '^': kind = Tok::caret; break;
      case '(': kind = Tok::lparen; break;
      case ')': kind = Tok::rparen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start,
                         {"number", "identifier", "'('", "'-'"});
    }
    out.push_back({kind, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::end, text.size(), ""});
  return out;
}

Rational parse_number(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    Integer num(text.substr(0, slash));
    Integer den(text.substr(slash + 1));
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(Integer(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  if (digits.empty()) digits = "0";
  Integer scale = 1;
  for (std::size_t k = dot + 1; k < text.size(); ++k) scale *= 10;
  return Rational(Integer(digits), scale);
}

std::optional<Function> lookup_function(const std::string& name) {
  if (name == "exp") return Function::exp;
  if (name == "log") return Function::log;
  if (name == "sin") return Function::sin;
  if (name == "cos") return Function::cos;
  if (name == "sqrt") return Function::sqrt;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const ParseOptions& options) : tokens_(std::move(tokens)), options_(options) {}

  Expr parse_all() {
    Expr e = expression();
    if (peek().kind != Tok::end) fail({Tok::plus, Tok::minus, Tok::star, Tok::slash, Tok::caret, Tok::end});
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(std::initializer_list<Tok> expected) const {
    std::vector<std::string> names;
    std::string list;
    for (Tok t : expected) {
      names.push_back(describe(t));
      list += (list.empty() ? "" : ", ") + names.back();
    }
    const Token& t = peek();
    const std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
    throw ParseError("syntax error at offset " + std::to_string(t.offset) + ": found " + found + ", expected one of " + list,
                     t.offset, std::move(names));
  }

  Expr expression() {
    std::vector<Expr> terms{term()};
    while (true) {
      if (accept(Tok::plus)) {
        terms.push_back(term());
      } else if (accept(Tok::minus)) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : sum(std::move(terms));
  }

  Expr term() {
    std::vector<Expr> factors{factor()};
    while (true) {
      if (accept(Tok::star)) {
        factors.push_back(factor());
      } else if (accept(Tok::slash)) {
        factors.push_back(power(factor(), integer(-1)));
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors.front() : product(std::move(factors));
  }

  Expr factor() {
    if (accept(Tok::minus)) return -factor();
    Expr b = base();
    if (accept(Tok::caret)) return power(b, factor());
    return b;
  }

  Expr base() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: advance(); return constant(parse_number(t.text));
      case Tok::lparen: {
        advance();
        Expr inner = expression();
        if (!accept(Tok::rparen)) fail({Tok::rparen});
        return inner;
      }
      case Tok::ident: {
        advance();
        if (peek().kind == Tok::lparen) {
          auto fn = lookup_function(t.text);
          if (!fn) throw ParseError("unknown function name '" + t.text + "'", t.offset, {"exp", "log", "sin", "cos", "sqrt"});
          advance();
          Expr arg = expression();
          if (!accept(Tok::rparen)) fail({Tok::rparen});
          return apply(*fn, arg);
        }
        return identifier(t);
      }
      default: fail({Tok::number, Tok::ident, Tok::lparen, Tok::minus});
    }
  }

  Expr identifier(const Token& t) {
    if (options_.unknowns.count(t.text)) return derivative(t.text);
    const auto underscore = t.text.rfind('_');
    if (underscore != std::string::npos && underscore + 1 < t.text.size()) {
      const std::string prefix = t.text.substr(0, underscore);
      if (options_.unknowns.count(prefix)) {
        MultiIndex index;
        for (std::size_t k = underscore + 1; k < t.text.size(); ++k) {
          const std::string var(1, t.text[k]);
          const bool ok = options_.variables.empty() ? std::isalpha(static_cast<unsigned char>(t.text[k])) != 0
                                                     : options_.variables.count(var) > 0;
          if (!ok) {
            throw ParseError("derivative suffix '" + var + "' of '" + t.text + "' is not a declared variable",
                             t.offset + k);
          }
          ++index[var];
        }
        return derivative(prefix, std::move(index));
      }
    }
    return variable(t.text);
  }

  std::vector<Token> tokens_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) {
  Parser p(tokenize(text), options);
  return p.parse_all();
}

}  // namespace weiss::expr
