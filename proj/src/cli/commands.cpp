#include "weiss/cli/commands.hpp"

#include <set>
#include <sstream>

#include "weiss/diffop/weiss_operator.hpp"
#include "weiss/errors.hpp"
#include "weiss/expr/parse.hpp"
#include "weiss/nullspace/null_functions.hpp"
#include "weiss/nullspace/theorem_suite.hpp"
#include "weiss/verify/report.hpp"

namespace weiss::cli {

namespace {

using expr::Expr;

diffop::WeissOperator build(const Problem& p) {
  diffop::WeissOptions wo;
  wo.simplify = p.simplify;
  return diffop::build_weiss(p.op, p.phi, p.spec.order_n, wo);
}

bool nonlinear(const Problem& p) {
  for (const auto& a : p.op.coeffs()) {
    if (expr::depends_on_unknown(a, p.spec.unknown)) return true;
  }
  return expr::depends_on_unknown(p.phi, p.spec.unknown);
}

std::vector<Expr> solutions(const Problem& p) {
  if (!nonlinear(p)) {
    return {nullspace::general_null(p.op, p.phi, p.spec.order_n, p.solution_coefficients, p.simplify).expr};
  }
  return nullspace::solve_self_consistent(p.op, p.phi, p.spec.order_n, p.solution_coefficients, p.spec.unknown,
                                          p.simplify)
      .branches;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

CommandResult listing(const std::string& command, std::vector<std::string> lines) {
  CommandResult r;
  r.command = command;
  r.text = join_lines(lines);
  r.rendered = std::move(lines);
  return r;
}

// Parameters of the candidate that are neither variables nor bound by the
// problem file.
std::set<std::string> free_parameters(const Problem& p, const std::vector<Expr>& candidates) {
  std::set<std::string> out;
  for (const auto& c : candidates) {
    for (const auto& s : expr::free_symbols(c)) {
      if (!p.domain.has(s) && s != p.spec.unknown && !p.parameter_values.count(s)) out.insert(s);
    }
  }
  return out;
}

bool samplable(const std::vector<Expr>& candidates, const expr::SampleDomain& dom, std::size_t count,
               std::uint64_t seed) {
  for (const auto& c : candidates) {
    try {
      const expr::SampleDomain guarded = expr::with_implicit_guards(dom, c);
      for (const auto& pt : expr::sample_points(guarded, count, seed)) {
        expr::evaluate(c, expr::assignment_at(guarded, pt));
      }
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

}  // namespace

nlohmann::ordered_json CommandResult::machine() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["verdict"] = verdict;
  j["max_residual"] = max_residual ? nlohmann::ordered_json(*max_residual) : nlohmann::ordered_json(nullptr);
  j["tolerance"] = tolerance ? nlohmann::ordered_json(*tolerance) : nlohmann::ordered_json(nullptr);
  j["samples"] = samples ? nlohmann::ordered_json(*samples) : nlohmann::ordered_json(nullptr);
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["rendered_expressions"] = rendered;
  return j;
}

CommandResult emit_operator(const Problem& p, const CommandOptions& o) {
  const diffop::WeissOperator l = build(p);
  const auto show = [&](const Expr& e) { return expr::emit(e, o.format); };
  return listing("emit-operator", {"D = " + p.op.describe(o.format), "D(phi) = " + show(l.d_phi()),
                                   "V = " + show(l.pre_schwarzian()), "Q = " + show(l.q_potential()),
                                   "L = " + l.describe(o.format)});
}

CommandResult emit_pde(const Problem& p, const CommandOptions& o) {
  const diffop::WeissOperator l = build(p);
  Expr pde = diffop::expand_pde(l, p.spec.unknown);
  if (o.paper_form) pde = diffop::divide_common_factor(pde, p.spec.unknown);
  return listing("emit-pde", {expr::emit_sum(diffop::pde_terms(pde, p.spec.unknown), o.format)});
}

CommandResult solve(const Problem& p, const CommandOptions& o) {
  std::vector<std::string> lines;
  for (const auto& s : solutions(p)) lines.push_back(expr::emit(s, o.format));
  return listing("solve", std::move(lines));
}

CommandResult verify(const Problem& p, const CommandOptions& o) {
  CommandResult r;
  r.command = "verify";
  r.tolerance = o.tolerance.value_or(p.spec.tolerance.value_or(expr::kDefaultTolerance));
  r.samples = o.samples.value_or(p.spec.samples.value_or(expr::kDefaultSamples));
  r.seed = o.seed.value_or(p.spec.seed.value_or(expr::kDefaultSeed));
  if (*r.samples == 0) throw InvalidArgument("sample count must be at least 1");

  std::vector<Expr> candidates;
  if (o.candidate) {
    expr::ParseOptions po;
    po.unknowns = {p.spec.unknown};
    po.variables = std::set<std::string>(p.spec.variables.begin(), p.spec.variables.end());
    candidates.push_back(expr::parse(*o.candidate, po));
  } else {
    candidates = solutions(p);
  }

  std::ostringstream text;
  std::map<std::string, Expr> bindings = p.parameter_values;
  std::vector<Expr> bound;
  const auto bind_all = [&]() {
    bound.clear();
    for (const auto& c : candidates) bound.push_back(expr::substitute(c, bindings));
  };
  const std::set<std::string> unbound = free_parameters(p, candidates);
  bind_all();
  if (!unbound.empty()) {
    // Random rationals in [-2, 2], redrawn until every candidate can be
    // evaluated on the domain.
    expr::SplitMix64 rng(*r.seed ^ 0x70617261ULL);
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      bool all_zero = true;
      for (const auto& name : unbound) {
        const auto num = static_cast<std::int64_t>(rng.next() % 17) - 8;
        all_zero = all_zero && num == 0;
        bindings[name] = expr::rational(num, 4);
      }
      if (all_zero) continue;
      bind_all();
      ok = samplable(bound, p.domain, *r.samples, *r.seed);
    }
    if (!ok) {
      r.exit_code = kExitInconclusive;
      r.verdict = "inconclusive";
      r.text = "no parameter draw keeps the candidate real on the domain\n";
      return r;
    }
  }
  for (const auto& [name, value] : bindings) text << "bind " << name << " = " << expr::emit(value) << '\n';

  const Expr pde = diffop::expand_pde(build(p), p.spec.unknown);
  bool any_fail = false;
  bool any_inconclusive = false;
  double worst = 0.0;
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const verify::VerificationReport report =
        verify::residual_check(pde, p.spec.unknown, bound[i], p.domain, *r.samples, *r.tolerance, *r.seed);
    r.rendered.push_back(expr::emit(bound[i]));
    worst = std::max(worst, report.max_residual);
    any_fail = any_fail || report.verdict == verify::Verdict::fail;
    any_inconclusive = any_inconclusive || report.verdict == verify::Verdict::inconclusive;
    text << "[candidate " << i + 1 << " of " << bound.size() << "]\n";
    text << verify::to_key_value(report, o.show_points);
  }
  r.max_residual = worst;
  if (any_fail) {
    r.exit_code = kExitFail;
    r.verdict = "fail";
  } else if (any_inconclusive) {
    r.exit_code = kExitInconclusive;
    r.verdict = "inconclusive";
  }
  r.text = text.str();
  return r;
}

CommandResult theorem_check(const TheoremCheckOptions& o) {
  if (o.dims < 1 || o.dims > 4) throw InvalidArgument("--dims must lie in 1..4");
  if (o.max_n < 0 || o.max_n > 8) throw InvalidArgument("--max-n must lie in 0..8");
  nullspace::TheoremSuiteConfig config;
  config.max_dim = o.dims;
  config.max_n = o.max_n;
  config.trials = o.trials;
  config.seed = o.seed;
  config.tolerance = o.tolerance;
  config.mutation.flipped_factor = o.mutate_factor;
  config.mutation.corrupt_pre_schwarzian = o.mutate_v;
  config.stop_on_failure = o.mutate_factor.has_value() || o.mutate_v;
  const nullspace::TheoremSuiteResult result = nullspace::run_theorem_suite(config);

  CommandResult r;
  r.command = "theorem-check";
  r.tolerance = o.tolerance;
  r.samples = config.samples;
  r.seed = o.seed;
  std::ostringstream text;
  text << "instances = " << result.instances << '\n';
  text << "checks = " << result.checks << '\n';
  text << "passed = " << result.passed << '\n';
  for (const auto& f : result.failures) {
    std::string line = "FAIL " + f.check + (f.k >= 0 ? " k=" + std::to_string(f.k) : "") + ": " + f.detail +
                       " | suite seed=" + std::to_string(o.seed) + " instance " + f.instance.describe();
    text << line << '\n';
    r.rendered.push_back(line);
  }
  if (!result.all_passed()) {
    r.exit_code = kExitFail;
    r.verdict = "fail";
  }
  text << "verdict = " << r.verdict << '\n';
  r.text = text.str();
  return r;
}

CommandResult guarded(const std::string& command, const std::function<CommandResult()>& body) {
  CommandResult r;
  r.command = command;
  auto failed = [&](int code, const std::string& verdict, const std::string& what) {
    r.exit_code = code;
    r.verdict = verdict;
    r.text = "error: " + what + '\n';
    r.rendered = {what};
    return r;
  };
  try {
    return body();
  } catch (const ParseError& e) {
    return failed(kExitInvalid, "error", e.what());
  } catch (const InvalidArgument& e) {
    return failed(kExitInvalid, "error", e.what());
  } catch (const CoefficientArityMismatch& e) {
    return failed(kExitInvalid, "error", e.what());
  } catch (const DegenerateProducingFunction& e) {
    return failed(kExitDegenerate, "error", e.what());
  } catch (const PatternNotRecognized& e) {
    return failed(kExitPattern, "error", e.what());
  } catch (const DomainExhausted& e) {
    return failed(kExitInconclusive, "inconclusive", e.what());
  } catch (const EvaluationError& e) {
    return failed(kExitInconclusive, "inconclusive", e.what());
  } catch (const std::exception& e) {
    return failed(kExitFail, "error", e.what());
  }
}

}  // namespace weiss::cli
