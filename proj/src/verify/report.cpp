#include "weiss/verify/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "weiss/errors.hpp"
#include "weiss/expr/emit.hpp"

namespace weiss::verify {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

VerificationReport run(const Expr& target, const std::string& rendered, const SampleDomain& dom, std::size_t count,
                       double tol, std::uint64_t seed) {
  VerificationReport r;
  r.expression = rendered;
  r.domain = dom.describe();
  r.seed = seed;
  r.samples = count;
  r.tolerance = tol;
  for (const auto& iv : dom.intervals) r.coordinates.push_back(iv.name);

  const SampleDomain guarded = expr::with_implicit_guards(dom, target);
  try {
    r.points = expr::sample_points(guarded, count, seed);
  } catch (const DomainExhausted& e) {
    r.note = e.what();
    return r;
  }
  for (const auto& p : r.points) {
    const expr::Assignment a = expr::assignment_at(guarded, p);
    try {
      const double value = expr::evaluate(target, a);
      const double residual = std::abs(value) / (1.0 + expr::term_scale(target, a));
      r.residuals.push_back(residual);
      r.max_abs_value = std::max(r.max_abs_value, std::abs(value));
      r.max_residual = std::max(r.max_residual, residual);
    } catch (const EvaluationError& e) {
      r.note = e.what();
      r.points.resize(r.residuals.size());
      return r;
    }
  }
  r.verdict = r.max_residual <= tol ? Verdict::pass : Verdict::fail;
  return r;
}

}  // namespace

VerificationReport residual_check(const Expr& pde_lhs, const std::string& unknown, const Expr& candidate,
                                  const SampleDomain& dom, std::size_t count, double tol, std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be at least 1");
  const Expr target = expr::substitute(pde_lhs, {{unknown, candidate}});
  return run(target, expr::emit(pde_lhs) + " @ " + unknown + " = " + expr::emit(candidate), dom, count, tol, seed);
}

VerificationReport residual_check(const Expr& e, const SampleDomain& dom, std::size_t count, double tol,
                                  std::uint64_t seed) {
  if (count == 0) throw InvalidArgument("sample count must be at least 1");
  return run(e, expr::emit(e), dom, count, tol, seed);
}

FdResult fd_crosscheck(const Expr& e, const std::string& var, const expr::Assignment& point, double h) {
  FdResult out;
  out.symbolic = expr::evaluate(expr::differentiate(e, var), point);
  expr::Assignment shifted = point;
  const double x = point.values.at(var);
  shifted.values[var] = x + h;
  const double up = expr::evaluate(e, shifted);
  shifted.values[var] = x - h;
  const double down = expr::evaluate(e, shifted);
  out.numeric = (up - down) / (2.0 * h);
  out.abs_diff = std::abs(out.symbolic - out.numeric);
  return out;
}

std::string to_key_value(const VerificationReport& r, bool include_points) {
  std::ostringstream out;
  out << "expression = " << r.expression << '\n';
  out << "domain = " << r.domain << '\n';
  out << "seed = " << r.seed << '\n';
  out << "samples = " << r.samples << '\n';
  out << "accepted = " << r.points.size() << '\n';
  out << "max_residual = " << format_double(r.max_residual) << '\n';
  out << "max_abs_value = " << format_double(r.max_abs_value) << '\n';
  out << "tolerance = " << format_double(r.tolerance) << '\n';
  out << "verdict = " << verdict_name(r.verdict) << '\n';
  if (!r.note.empty()) out << "note = " << r.note << '\n';
  for (std::size_t i = 0; include_points && i < r.points.size(); ++i) {
    out << "point." << i << " =";
    for (std::size_t c = 0; c < r.points[i].size(); ++c) {
      const std::string name = c < r.coordinates.size() ? r.coordinates[c] : "?";
      out << ' ' << name << '=' << format_double(r.points[i][c]);
    }
    if (i < r.residuals.size()) out << " residual=" << format_double(r.residuals[i]);
    out << '\n';
  }
  return out.str();
}

nlohmann::ordered_json to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["expression"] = r.expression;
  j["domain"] = r.domain;
  j["seed"] = r.seed;
  j["samples"] = r.samples;
  j["coordinates"] = r.coordinates;
  j["points"] = r.points;
  j["residuals"] = r.residuals;
  j["max_residual"] = r.max_residual;
  j["max_abs_value"] = r.max_abs_value;
  j["tolerance"] = r.tolerance;
  j["verdict"] = verdict_name(r.verdict);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace weiss::verify
