#include "weiss/cli/problem.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "weiss/errors.hpp"
#include "weiss/expr/parse.hpp"

namespace weiss::cli {

namespace {

struct Value;
using List = std::vector<Value>;
using Map = std::vector<std::pair<std::string, Value>>;

// Scalars stay as text; each field converts them as needed.
struct Value {
  std::variant<std::string, List, Map> data;
  bool quoted = false;
};

class Reader {
 public:
  explicit Reader(const std::string& text) : s_(text) {}

  std::vector<std::pair<std::string, Value>> statements() {
    std::vector<std::pair<std::string, Value>> out;
    for (;;) {
      skip_separators();
      if (pos_ >= s_.size()) return out;
      const std::string key = identifier();
      skip_blanks();
      expect('=');
      Value v = value();
      out.emplace_back(key, std::move(v));
      skip_blanks();
      if (pos_ < s_.size() && s_[pos_] != ';' && s_[pos_] != '\n') fail("expected ';' or newline", {";", "newline"});
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected = {}) const {
    throw ParseError("problem file: " + message, pos_, std::move(expected));
  }

  void skip_comment() {
    if (pos_ < s_.size() && s_[pos_] == '#') {
      while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
    }
  }

  // Spaces and tabs only; newlines end statements.
  void skip_blanks() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    skip_comment();
  }

  void skip_separators() {
    for (;;) {
      skip_blanks();
      if (pos_ < s_.size() && (s_[pos_] == ';' || s_[pos_] == '\n')) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  // Inside brackets newlines are plain whitespace.
  void skip_space() {
    for (;;) {
      skip_blanks();
      if (pos_ < s_.size() && s_[pos_] == '\n') {
        ++pos_;
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'", {std::string(1, c)});
    ++pos_;
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a key", {"identifier"});
    return s_.substr(start, pos_ - start);
  }

  Value value() {
    skip_blanks();
    if (pos_ >= s_.size()) fail("expected a value", {"value"});
    const char c = s_[pos_];
    if (c == '"') return string_value();
    if (c == '[') return list_value();
    if (c == '{') return map_value();
    return bare_value();
  }

  Value string_value() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\n') fail("unterminated string", {"\""});
      out += s_[pos_++];
    }
    expect('"');
    return Value{out, true};
  }

  Value list_value() {
    ++pos_;
    List items;
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return Value{items, false};
    }
    for (;;) {
      skip_space();
      items.push_back(value());
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect(']');
      return Value{items, false};
    }
  }

  Value map_value() {
    ++pos_;
    Map entries;
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == '}') {
      ++pos_;
      return Value{entries, false};
    }
    for (;;) {
      skip_space();
      std::string key = identifier();
      skip_blanks();
      expect('=');
      entries.emplace_back(std::move(key), value());
      skip_space();
      if (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return Value{entries, false};
    }
  }

  // Unquoted scalar, up to the next separator.
  Value bare_value() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::string_view(",;]}\n#").find(s_[pos_]) == std::string_view::npos) ++pos_;
    std::string text = s_.substr(start, pos_ - start);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    if (text.empty() || text.find_first_of("=[{\"") != std::string::npos) {
      pos_ = start;
      fail("expected a value", {"value"});
    }
    return Value{text, false};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

const std::string& scalar(const std::string& key, const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
  throw InvalidArgument("'" + key + "' must be a single value");
}

std::vector<std::string> strings(const std::string& key, const Value& v) {
  const auto* list = std::get_if<List>(&v.data);
  if (list == nullptr) throw InvalidArgument("'" + key + "' must be a list");
  std::vector<std::string> out;
  for (const auto& item : *list) out.push_back(scalar(key, item));
  return out;
}

double number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("'" + key + "' expects a number, got '" + text + "'");
}

std::uint64_t unsigned_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const unsigned long long u = std::stoull(text, &used);
    if (used == text.size() && text.front() != '-') return u;
  } catch (const std::exception&) {
  }
  throw InvalidArgument("'" + key + "' expects a non-negative integer, got '" + text + "'");
}

const Map& entries(const std::string& key, const Value& v) {
  const auto* map = std::get_if<Map>(&v.data);
  if (map == nullptr) throw InvalidArgument("'" + key + "' must be a map {name=...}");
  return *map;
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  ProblemSpec spec;
  std::set<std::string> seen;
  for (const auto& [key, v] : Reader(text).statements()) {
    if (!seen.insert(key).second) throw InvalidArgument("duplicate key '" + key + "'");
    if (key == "variables") {
      spec.variables = strings(key, v);
    } else if (key == "coefficients") {
      spec.coefficients = strings(key, v);
    } else if (key == "phi") {
      spec.phi = scalar(key, v);
    } else if (key == "order_n") {
      const std::uint64_t n = unsigned_number(key, scalar(key, v));
      if (n > 1000) throw InvalidArgument("order_n is out of range");
      spec.order_n = static_cast<int>(n);
    } else if (key == "unknown") {
      spec.unknown = scalar(key, v);
    } else if (key == "solution_coefficients") {
      spec.solution_coefficients = strings(key, v);
    } else if (key == "domain") {
      for (const auto& [name, range] : entries(key, v)) {
        const std::vector<std::string> bounds = strings("domain." + name, range);
        if (bounds.size() != 2) throw InvalidArgument("domain." + name + " must be [lo, hi]");
        spec.domain.push_back({name, number(key, bounds[0]), number(key, bounds[1])});
      }
    } else if (key == "tolerance") {
      spec.tolerance = number(key, scalar(key, v));
    } else if (key == "samples") {
      spec.samples = unsigned_number(key, scalar(key, v));
    } else if (key == "seed") {
      spec.seed = unsigned_number(key, scalar(key, v));
    } else if (key == "parameter_values") {
      for (const auto& [name, value] : entries(key, v)) spec.parameter_values[name] = scalar(key, value);
    } else {
      throw InvalidArgument("unknown key '" + key + "'");
    }
  }
  if (spec.variables.empty()) throw InvalidArgument("'variables' is required");
  if (!seen.count("coefficients")) throw InvalidArgument("'coefficients' is required");
  if (spec.phi.empty()) throw InvalidArgument("'phi' is required");
  if (!seen.count("order_n")) throw InvalidArgument("'order_n' is required");
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

Problem compile(const ProblemSpec& spec) {
  if (spec.coefficients.size() != spec.variables.size()) {
    throw InvalidArgument("expected " + std::to_string(spec.variables.size()) + " coefficients, got " +
                          std::to_string(spec.coefficients.size()));
  }
  std::set<std::string> vars(spec.variables.begin(), spec.variables.end());
  if (vars.size() != spec.variables.size()) throw InvalidArgument("duplicate variable name");
  if (vars.count(spec.unknown)) throw InvalidArgument("the unknown may not also be a variable");

  expr::ParseOptions po;
  po.unknowns = {spec.unknown};
  po.variables = vars;
  auto parse_field = [&](const std::string& field, const std::string& text) {
    try {
      return expr::parse(text, po);
    } catch (const ParseError& e) {
      throw ParseError(field + ": " + e.what(), e.offset(), e.expected());
    }
  };

  std::vector<expr::Expr> coeffs;
  for (std::size_t i = 0; i < spec.coefficients.size(); ++i) {
    coeffs.push_back(parse_field("coefficients[" + std::to_string(i) + "]", spec.coefficients[i]));
  }
  const expr::Expr phi = parse_field("phi", spec.phi);

  std::vector<expr::Expr> solution;
  if (spec.solution_coefficients.empty()) {
    for (int k = 0; k <= spec.order_n; ++k) solution.push_back(expr::variable("c" + std::to_string(k)));
  } else {
    if (spec.solution_coefficients.size() != static_cast<std::size_t>(spec.order_n) + 1) {
      throw CoefficientArityMismatch("expected " + std::to_string(spec.order_n + 1) +
                                     " solution coefficients, got " +
                                     std::to_string(spec.solution_coefficients.size()));
    }
    for (std::size_t k = 0; k < spec.solution_coefficients.size(); ++k) {
      solution.push_back(parse_field("solution_coefficients[" + std::to_string(k) + "]",
                                     spec.solution_coefficients[k]));
    }
  }

  std::map<std::string, expr::Expr> params;
  for (const auto& [name, text] : spec.parameter_values) {
    if (vars.count(name) || name == spec.unknown) {
      throw InvalidArgument("parameter_values may not bind '" + name + "'");
    }
    params[name] = parse_field("parameter_values." + name, text);
  }

  expr::SampleDomain dom;
  for (const auto& v : spec.variables) dom.add(v, 1.0, 2.0);
  for (const auto& iv : spec.domain) {
    if (!vars.count(iv.name)) throw InvalidArgument("domain names undeclared variable '" + iv.name + "'");
    dom.add(iv.name, iv.lo, iv.hi);
  }
  dom.validate();

  Problem p{spec, diffop::DirectionalOperator(spec.variables, std::move(coeffs)), phi, std::move(solution),
            std::move(params), std::move(dom), {}};
  for (const auto& iv : p.domain.intervals) {
    if (iv.lo > 0) p.simplify.assumptions.positive.insert(iv.name);
  }
  return p;
}

}  // namespace weiss::cli
