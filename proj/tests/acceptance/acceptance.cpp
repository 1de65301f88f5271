// Runs every acceptance criterion and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support/generators.hpp"
#include "weiss/diffop/weiss_operator.hpp"
#include "weiss/errors.hpp"
#include "weiss/expr/emit.hpp"
#include "weiss/expr/parse.hpp"
#include "weiss/nullspace/null_functions.hpp"
#include "weiss/nullspace/theorem_suite.hpp"
#include "weiss/verify/report.hpp"

using namespace weiss;
using namespace weiss::expr;
using namespace weiss::diffop;
using namespace weiss::nullspace;
using weiss::testing::unit_box;

namespace {

Expr P(const char* text) { return parse(text); }

DirectionalOperator op(std::vector<std::string> vars, std::vector<const char*> coeffs) {
  std::vector<Expr> parsed;
  for (const char* c : coeffs) parsed.push_back(P(c));
  return DirectionalOperator(std::move(vars), std::move(parsed));
}

// Collects failed sub-checks of one criterion.
struct Criterion {
  std::vector<std::string> failures;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

bool same(const Expr& a, const Expr& b, const SampleDomain& dom, double tol) {
  const Expr diff = a - b;
  return is_zero(diff, with_jet_intervals(dom, diff, "psi", 1, 2), kDefaultSamples, tol, kDefaultSeed).zero;
}

SampleDomain with_params(SampleDomain dom, const std::vector<std::string>& params) {
  for (const auto& p : params) dom.add(p, 1, 2);
  return dom;
}

std::map<std::string, Expr> ones(int n) {
  std::map<std::string, Expr> out;
  for (int k = 0; k <= n; ++k) out["c" + std::to_string(k)] = integer(1);
  return out;
}

void example_one(Criterion& c) {
  const double tol = 1e-10;
  const SampleDomain box = unit_box({"x", "y"});
  const DirectionalOperator d = op({"x", "y"}, {"1", "-1"});
  const Expr phi = P("x/y");
  const WeissOperator l = build_weiss(d, phi, 1);
  c.expect(same(l.d_phi(), P("(x+y)/y^2"), box, tol), "D phi");
  c.expect(same(l.d2_phi(), P("2*(x+y)/y^3"), box, tol), "D^2 phi");
  c.expect(same(l.pre_schwarzian(), P("2/y"), box, tol), "V");
  c.expect(same(l.q_potential(), integer(0), box, tol), "Q");
  const NormalForm nf = normal_form(l);
  c.expect(same(nf.coefficient({2, 0}), integer(1), box, tol), "psi_xx coefficient");
  c.expect(same(nf.coefficient({1, 1}), integer(-2), box, tol), "psi_xy coefficient");
  c.expect(same(nf.coefficient({0, 2}), integer(1), box, tol), "psi_yy coefficient");
  for (const auto& [alpha, coeff] : nf.coefficients)
    if (alpha != std::vector<int>{2, 0} && alpha != std::vector<int>{1, 1} && alpha != std::vector<int>{0, 2})
      c.expect(same(coeff, integer(0), box, tol), "no other terms");
  const Expr solution = general_null(d, phi, 1, default_coefficients(1)).expr;
  c.expect(same(solution, P("(c0*y + c1*x)/sqrt(x+y)"), with_params(box, {"c0", "c1"}), tol), "solution form");
  const auto report = verify::residual_check(expand_pde(l), "psi", substitute(solution, ones(1)), box, 32, 1e-8);
  c.expect(report.passed(), "residual check");
  c.detail = "max residual " + verify::format_double(report.max_residual);
}

void example_lpde(Criterion& c) {
  const SampleDomain box = unit_box({"x", "y"});
  const DirectionalOperator d = op({"x", "y"}, {"1", "x^2"});
  const WeissOperator l = build_weiss(d, P("x+y"), 1);
  c.expect(same(l.pre_schwarzian(), P("2*x/(1+x^2)"), box, 1e-10), "V");
  c.expect(same(l.q_potential(), P("(1-2*x^2)/(1+x^2)^2"), box, 1e-10), "Q");
  const Expr lpde = P("psi_xx + 2*x^2*psi_xy + x^4*psi_yy + 2*x*psi_y + (1-2*x^2)/(1+x^2)^2*psi");
  c.expect(same(simplify(expand_pde(l)), lpde, box, 1e-10), "PDE");
  c.expect(pde_terms(expand_pde(l)).size() == 5, "five terms");
  const Expr solution = general_null(d, P("x+y"), 1, default_coefficients(1)).expr;
  c.expect(same(solution, P("(c0 + c1*(x+y))/sqrt(1+x^2)"), with_params(box, {"c0", "c1"}), 1e-10), "solution form");
  double worst = 0;
  for (const auto& [c0, c1] : std::vector<std::pair<int, int>>{{1, 1}, {2, -1}, {-3, 2}}) {
    const Expr bound = substitute(solution, {{"c0", integer(c0)}, {"c1", integer(c1)}});
    const auto report = verify::residual_check(expand_pde(l), "psi", bound, box, 32, 1e-8);
    c.expect(report.passed(), "residual check");
    worst = std::max(worst, report.max_residual);
  }
  c.detail = "max residual " + verify::format_double(worst);
}

void example_npde(Criterion& c) {
  SampleDomain dom;
  dom.add("x", 0, 1).add("y", 2, 3);
  const DirectionalOperator d = op({"x", "y"}, {"-psi", "psi"});
  const WeissOperator l = build_weiss(d, P("y-x"), 1);
  c.expect(same(l.d_phi(), P("2*psi"), dom, 1e-10), "D phi");
  c.expect(same(l.pre_schwarzian(), P("psi_y - psi_x"), dom, 1e-10), "V");
  const Expr qcof = P("1/2*psi*psi_xx + 1/2*psi*psi_yy - psi*psi_xy - 1/4*psi_y^2 + 1/2*psi_x*psi_y - 1/4*psi_x^2");
  c.expect(same(l.q_potential(), qcof, dom, 1e-10), "Q");
  const SelfConsistentSolution s = solve_self_consistent(d, P("y-x"), 1, default_coefficients(1));
  c.expect(s.branches.size() == 1, "one branch");
  if (s.branches.empty()) return;
  c.expect(same(s.branches[0], P("(c0 + c1*(y-x))^(2/3)/2^(1/3)"), with_params(dom, {"c0", "c1"}), 1e-10), "branch");
  const Expr npde = P("psi*psi_xx + psi*psi_yy - 2*psi*psi_xy + 1/2*psi_x^2 + 1/2*psi_y^2 - psi_x*psi_y");
  double worst = 0;
  for (const auto& [c0, c1] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 3}}) {
    const Expr bound = substitute(s.branches[0], {{"c0", integer(c0)}, {"c1", integer(c1)}});
    const auto report = verify::residual_check(npde, "psi", bound, dom, 32, 1e-8);
    c.expect(report.passed(), "residual check");
    worst = std::max(worst, report.max_residual);
  }
  c.detail = "max residual " + verify::format_double(worst) + " (six-term form)";
}

void example_ipde(Criterion& c) {
  const SampleDomain box = unit_box({"x", "y", "z"});
  const DirectionalOperator d = op({"x", "y", "z"}, {"1", "1", "psi"});
  const WeissOperator l = build_weiss(d, P("x-y+z"), 2);
  c.expect(same(l.d_phi(), P("psi"), box, 1e-10), "D phi");
  const Expr psi = P("psi");
  const Expr q = l.q_potential();
  const Expr oracle = d.apply_power(psi, 3) + 4 * q * d.apply(psi) + 2 * psi * d.apply(q);
  c.expect(same(expand_pde(l), oracle, box, 1e-10), "third-order form");
  const SelfConsistentSolution s = solve_self_consistent(d, P("x-y+z"), 2, default_coefficients(2));
  c.expect(s.branches.size() == 2, "two branches");
  const Expr root = P("sqrt(c0 + c1*(x-y+z) + c2*(x-y+z)^2)");
  const SampleDomain params = with_params(box, {"c0", "c1", "c2"});
  if (s.branches.size() == 2) {
    c.expect(same(s.branches[0], root, params, 1e-10), "positive branch");
    c.expect(same(s.branches[1], -root, params, 1e-10), "negative branch");
  }
  double worst = 0;
  for (const Expr& b : s.branches) {
    for (const auto& cs : std::vector<std::vector<int>>{{1, 1, 1}, {2, -1, 1}, {3, 0, 2}}) {
      const Expr bound = substitute(b, {{"c0", integer(cs[0])}, {"c1", integer(cs[1])}, {"c2", integer(cs[2])}});
      const auto report = verify_solution(d, P("x-y+z"), 2, bound, box, 1e-8);
      c.expect(report.passed(), "branch residual");
      worst = std::max(worst, report.max_residual);
    }
  }
  c.detail = "max residual " + verify::format_double(worst);
}

void classical(Criterion& c) {
  SplitMix64 rng(2024);
  const DirectionalOperator d = op({"x"}, {"1"});
  const SampleDomain dom = unit_box({"x"});
  for (int i = 0; i < 10; ++i) {
    const Expr phi = testing::random_cubic(rng);
    const Expr p1 = differentiate(phi, "x"), p2 = differentiate(p1, "x"), p3 = differentiate(p2, "x");
    const Expr s = p3 / p1 - Rational(3, 2) * pow(p2 / p1, 2);
    const NormalForm l2 = normal_form(build_weiss(d, phi, 1));
    const NormalForm l3 = normal_form(build_weiss(d, phi, 2));
    const std::string tag = " for phi = " + emit(phi);
    c.expect(same(l2.coefficient({2}), integer(1), dom, 1e-8), "L2 d^2" + tag);
    c.expect(same(l2.coefficient({1}), integer(0), dom, 1e-8), "L2 d" + tag);
    c.expect(same(l2.coefficient({0}), s / 2, dom, 1e-8), "L2 potential" + tag);
    c.expect(same(l3.coefficient({3}), integer(1), dom, 1e-8), "L3 d^3" + tag);
    c.expect(same(l3.coefficient({2}), integer(0), dom, 1e-8), "L3 d^2" + tag);
    c.expect(same(l3.coefficient({1}), 2 * s, dom, 1e-8), "L3 d" + tag);
    c.expect(same(l3.coefficient({0}), differentiate(s, "x"), dom, 1e-8), "L3 potential" + tag);
  }
  c.detail = "10 cubics";
}

// Polynomial in x with |a| >= 1/4 on [1, 2].
Expr random_coefficient(SplitMix64& rng) {
  for (;;) {
    const Expr a = testing::random_polynomial(rng, {"x"}, 2);
    bool ok = true;
    double first = 0;
    for (int i = 0; ok && i <= 200; ++i) {
      Assignment at;
      at.values["x"] = 1.0 + i / 200.0;
      const double v = evaluate(a, at);
      if (i == 0) first = v;
      ok = std::abs(v) >= 0.25 && v * first > 0;
    }
    if (ok) return a;
  }
}

void one_dimensional(Criterion& c) {
  SplitMix64 rng(77);
  const SampleDomain dom = unit_box({"x"});
  for (int i = 0; i < 10; ++i) {
    const Expr a = random_coefficient(rng);
    const Expr phi = testing::random_cubic(rng);
    const DirectionalOperator d({"x"}, {a});
    const Expr ax = differentiate(a, "x");
    const Expr v = ax + a * differentiate(phi, {{"x", 2}}) / differentiate(phi, "x");
    const NormalForm nf = normal_form(build_weiss(d, phi, 1));
    const std::string tag = " for a = " + emit(a) + ", phi = " + emit(phi);
    c.expect(same(nf.coefficient({2}), a * a, dom, 1e-8), "d^2" + tag);
    c.expect(same(nf.coefficient({1}), a * ax, dom, 1e-8), "d" + tag);
    c.expect(same(nf.coefficient({0}), a * differentiate(v, "x") / 2 - v * v / 4, dom, 1e-8), "potential" + tag);
  }
  c.detail = "10 instances";
}

void theorem(Criterion& c) {
  TheoremSuiteConfig config;
  const TheoremSuiteResult r = run_theorem_suite(config);
  c.expect(r.instances == 100, "100 instances");
  for (const auto& f : r.failures) c.expect(false, f.check + " k=" + std::to_string(f.k) + " " + f.instance.describe());
  c.detail = std::to_string(r.passed) + "/" + std::to_string(r.checks) + " checks over " +
             std::to_string(r.instances) + " instances";
}

void mutation(Criterion& c) {
  int runs = 0, noops = 0;
  for (int n = 0; n <= 4; ++n) {
    for (int j = 0; j <= n; ++j) {
      TheoremSuiteConfig config;
      config.fixed_n = n;
      config.trials = 5;
      config.mutation.flipped_factor = static_cast<std::size_t>(j);
      config.stop_on_failure = true;
      const bool detected = !run_theorem_suite(config).all_passed();
      if (2 * j == n) {
        // The coefficient is zero, so the flipped operator is the original one.
        ++noops;
        c.expect(!detected, "zero-coefficient flip n=" + std::to_string(n) + " j=" + std::to_string(j));
        continue;
      }
      ++runs;
      c.expect(detected, "flip n=" + std::to_string(n) + " j=" + std::to_string(j));
    }
  }
  TheoremSuiteConfig corrupt;
  corrupt.trials = 10;
  corrupt.stop_on_failure = true;
  corrupt.mutation.corrupt_pre_schwarzian = true;
  c.expect(!run_theorem_suite(corrupt).all_passed(), "corrupted V");
  c.detail = std::to_string(runs) + " sign flips and corrupted V detected; " + std::to_string(noops) +
             " zero-coefficient flips are identities";
}

void finite_differences(Criterion& c) {
  SplitMix64 rng(909);
  const std::vector<std::string> vars{"x", "y"};
  int tested = 0, ratios = 0;
  double worst = 0;
  while (tested < 50) {
    const Expr e = testing::random_smooth(rng, vars, 3);
    const auto p = sample_points(with_implicit_guards(unit_box(vars, 1.1, 1.9), e), 1, rng.next())[0];
    Assignment a;
    a.values = {{"x", p[0]}, {"y", p[1]}};
    const std::string var = vars[rng.next() % 2];
    verify::FdResult coarse, fine;
    try {
      coarse = verify::fd_crosscheck(e, var, a, 1e-3);
      fine = verify::fd_crosscheck(e, var, a, 1e-4);
    } catch (const EvaluationError&) {
      continue;
    }
    ++tested;
    const double scale = 1 + std::abs(fine.symbolic);
    worst = std::max(worst, fine.abs_diff / scale);
    c.expect(fine.abs_diff <= 1e-6 * scale, "agreement for " + emit(e));
    const double floor = 1e-10 * (1 + std::abs(evaluate(e, a)));
    if (fine.abs_diff <= floor || coarse.abs_diff <= 100 * floor) continue;
    const double ratio = coarse.abs_diff / fine.abs_diff;
    ++ratios;
    c.expect(ratio >= 25 && ratio <= 400, "ratio " + verify::format_double(ratio) + " for " + emit(e));
  }
  c.detail = "50 expressions, " + std::to_string(ratios) + " above the rounding floor, worst scaled diff " +
             verify::format_double(worst);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"1 example reproduction (phi = x/y)", example_one},
      {"2 linear example (lpde)", example_lpde},
      {"3 nonlinear second order (npde)", example_npde},
      {"4 nonlinear third order (ipde)", example_ipde},
      {"5 classical degeneration", classical},
      {"6 one-dimensional a(x) reduction", one_dimensional},
      {"7 null-function property suite", theorem},
      {"8 mutation sensitivity", mutation},
      {"9 finite-difference validation", finite_differences},
  };
  int failed = 0;
  for (const auto& [name, body] : criteria) {
    Criterion c;
    const auto start = std::chrono::steady_clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = c.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("[%s] %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", name.c_str(), c.detail.c_str(), secs);
    for (const auto& f : c.failures) std::printf("    failed: %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
