#include <doctest.h>

#include "support/generators.hpp"
#include "weiss/errors.hpp"
#include "weiss/expr/emit.hpp"
#include "weiss/expr/parse.hpp"
#include "weiss/nullspace/null_functions.hpp"
#include "weiss/nullspace/theorem_suite.hpp"

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

const DirectionalOperator e1 = op({"x", "y"}, {"1", "-1"});
const DirectionalOperator lpde = op({"x", "y"}, {"1", "x^2"});
const DirectionalOperator npde = op({"x", "y"}, {"-psi", "psi"});
const DirectionalOperator ipde = op({"x", "y", "z"}, {"1", "1", "psi"});

SampleDomain npde_domain() {
  SampleDomain dom;
  dom.add("x", 0, 1).add("y", 2, 3);
  return dom;
}

bool same(const Expr& a, const Expr& b, const SampleDomain& dom, double tol = 1e-10) {
  return is_zero(a - b, dom, kDefaultSamples, tol, 42).zero;
}

ZeroTestConfig box_config(const std::vector<std::string>& vars, double tol = 1e-9) {
  ZeroTestConfig config;
  config.domain = unit_box(vars);
  config.tolerance = tol;
  return config;
}

Expr bind(const Expr& e, std::map<std::string, Expr> values) { return substitute(e, values); }

}  // namespace

TEST_SUITE("basis") {
  TEST_CASE("first example") {
    const auto b = basis(e1, P("x/y"), 1);
    REQUIRE(b.size() == 2);
    CHECK(same(b[0], P("y/sqrt(x+y)"), unit_box({"x", "y"})));
    CHECK(same(b[1], P("x/sqrt(x+y)"), unit_box({"x", "y"})));
  }

  TEST_CASE("n = 0 gives the constant function") {
    CHECK(basis(lpde, P("x+y"), 0) == std::vector<Expr>{integer(1)});
  }

  TEST_CASE("zero Schwarzian gives monomials") {
    CHECK(basis(op({"x"}, {"1"}), P("x"), 2) == std::vector<Expr>{integer(1), P("x"), P("x^2")});
  }

  TEST_CASE("degenerate producing function") { CHECK_THROWS_AS(basis(e1, P("x+y"), 1), DegenerateProducingFunction); }

  TEST_CASE("basis functions are independent") {
    // The threshold is absolute and the determinant shrinks like a product
    // of point spreads, so the box is widened for n = 4.
    for (int n = 0; n <= 4; ++n) {
      const IndependenceCheck check = independence(basis(lpde, P("x+y"), n), unit_box({"x", "y"}, 1, 5));
      CAPTURE(n);
      CHECK(check.independent);
    }
    const IndependenceCheck dependent = independence({P("x"), P("2*x")}, unit_box({"x", "y"}));
    CHECK_FALSE(dependent.independent);
    CHECK(std::abs(dependent.determinant) < 1e-12);
  }
}

TEST_SUITE("general null function") {
  TEST_CASE("worked solutions") {
    SimplifyOptions positive;
    positive.assumptions.positive = {"x", "y"};
    const NullFunction f1 = general_null(e1, P("x/y"), 1, default_coefficients(1), positive);
    CHECK(emit(f1.expr) == "(c0*y+c1*x)/(x+y)^(1/2)");
    CHECK(f1.d_phi == P("(x+y)/y^2"));
    const NullFunction f2 = general_null(lpde, P("x+y"), 1, default_coefficients(1));
    CHECK(same(f2.expr, P("(c0 + c1*(x+y))/sqrt(1+x^2)"), unit_box({"x", "y", "c0", "c1"})));
  }

  TEST_CASE("zero coefficients give zero") {
    CHECK(general_null(e1, P("x/y"), 2, {integer(0), integer(0), integer(0)}).expr.is_zero());
  }

  TEST_CASE("arity is checked") {
    CHECK_THROWS_AS(general_null(e1, P("x/y"), 1, default_coefficients(2)), CoefficientArityMismatch);
    CHECK(default_coefficients(2) == std::vector<Expr>{variable("c0"), variable("c1"), variable("c2")});
  }

  TEST_CASE("property: superposition is annihilated") {
    SplitMix64 rng(61);
    for (int i = 0; i < 20; ++i) {
      const TheoremInstance inst = random_instance(rng.next(), 2, 3);
      const DirectionalOperator d(inst.vars, inst.coeffs);
      std::vector<Expr> c;
      for (int k = 0; k <= inst.n; ++k) c.push_back(constant(testing::draw_rational(rng)));
      const WeissOperator l = build_weiss(d, inst.phi, inst.n);
      const NullFunction f = general_null(d, inst.phi, inst.n, c);
      CAPTURE(inst.describe());
      CHECK(is_zero(apply_weiss(l, f.expr), box_config(inst.vars, 1e-8)).zero);
    }
  }
}

TEST_SUITE("telescoping") {
  TEST_CASE("states follow the falling factorial") {
    const WeissOperator l = build_weiss(lpde, P("x+y"), 2);
    const TelescopingTrace t = verify_telescoping(l, 2, box_config({"x", "y"}));
    CHECK(t.passed);
    REQUIRE(t.states.size() == 4);
    const Expr dphi = P("1+x^2"), phi = P("x+y");
    CHECK(same(t.states[1], 2 * phi, unit_box({"x", "y"})));
    CHECK(same(t.states[2], 2 * dphi, unit_box({"x", "y"})));
    CHECK(same(t.states[3], integer(0), unit_box({"x", "y"})));
  }

  TEST_CASE("k = 0 vanishes after the first bracket") {
    const TelescopingTrace t = verify_telescoping(e1, P("x/y"), 3, 0, box_config({"x", "y"}));
    CHECK(t.passed);
    for (std::size_t m = 1; m < t.states.size(); ++m) CHECK(t.expected[m].is_zero());
  }

  TEST_CASE("argument checks") {
    const WeissOperator l = build_weiss(lpde, P("x+y"), 1);
    CHECK_THROWS_AS(verify_telescoping(l, 2, box_config({"x", "y"})), InvalidArgument);
    CHECK_THROWS_AS(verify_telescoping(l, -1, box_config({"x", "y"})), InvalidArgument);
    CHECK_THROWS_AS(verify_telescoping(build_weiss(npde, P("y-x"), 1), 0, box_config({"x", "y"})), NonlinearOperator);
  }

  TEST_CASE("a flipped bracket breaks the trace") {
    WeissOptions options;
    options.mutation.flipped_factor = 1;
    const WeissOperator l = build_weiss(lpde, P("x+y"), 1, options);
    const TelescopingTrace t = verify_telescoping(l, 1, box_config({"x", "y"}));
    CHECK_FALSE(t.passed);
    CHECK(t.states.size() < 3);
  }
}

TEST_SUITE("self-consistent solutions") {
  TEST_CASE("nonlinear second order") {
    const SelfConsistentSolution s = solve_self_consistent(npde, P("y-x"), 1, default_coefficients(1));
    CHECK(s.m == 1);
    CHECK(s.factor == integer(2));
    CHECK(s.exponent == Rational(3, 2));
    REQUIRE(s.branches.size() == 1);
    SampleDomain dom = npde_domain();
    dom.add("c0", 1, 2).add("c1", 1, 2);
    CHECK(same(s.branches[0], P("(c0 + c1*(y-x))^(2/3)/2^(1/3)"), dom));
  }

  TEST_CASE("nonlinear third order has two branches") {
    const SelfConsistentSolution s = solve_self_consistent(ipde, P("x-y+z"), 2, default_coefficients(2));
    CHECK(s.m == 1);
    CHECK(s.exponent == Rational(2));
    REQUIRE(s.branches.size() == 2);
    SampleDomain dom = unit_box({"x", "y", "z", "c0", "c1", "c2"});
    const Expr root = P("sqrt(c0 + c1*(x-y+z) + c2*(x-y+z)^2)");
    CHECK(same(s.branches[0], root, dom));
    CHECK(same(s.branches[1], -root, dom));
  }

  TEST_CASE("linear operators reduce to the general null function") {
    const SelfConsistentSolution s = solve_self_consistent(e1, P("x/y"), 1, default_coefficients(1));
    CHECK(s.m == 0);
    REQUIRE(s.branches.size() == 1);
    CHECK(s.branches[0] == general_null(e1, P("x/y"), 1, default_coefficients(1)).expr);
  }

  TEST_CASE("unrecognized patterns") {
    CHECK_THROWS_AS(solve_self_consistent(op({"x", "y"}, {"psi_x", "1"}), P("x"), 1, default_coefficients(1)),
                    PatternNotRecognized);
    CHECK_THROWS_AS(solve_self_consistent(op({"x", "y"}, {"1+psi", "0"}), P("x"), 1, default_coefficients(1)),
                    PatternNotRecognized);
    CHECK_THROWS_AS(solve_self_consistent(op({"x", "y"}, {"1/psi", "0"}), P("x"), 1, default_coefficients(1)),
                    PatternNotRecognized);
  }

  TEST_CASE("property: branches are fixed points of the defining relation") {
    SplitMix64 rng(71);
    const std::vector<std::pair<DirectionalOperator, std::pair<Expr, int>>> cases{
        {npde, {P("y-x"), 1}}, {ipde, {P("x-y+z"), 2}}};
    for (const auto& [d, rest] : cases) {
      const auto& [phi, n] = rest;
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<Expr> c;
        for (int k = 0; k <= n; ++k) c.push_back(integer(testing::draw_int(rng, 1, 3)));
        const SelfConsistentSolution s = solve_self_consistent(d, phi, n, c);
        const Expr dphi = d.apply(phi);
        SampleDomain dom = d.dimension() == 2 ? npde_domain() : unit_box({"x", "y", "z"});
        for (const Expr& b : s.branches) {
          if (n == 2 && b.is(Kind::product)) continue;  // negative branch: (D phi)^(-1) needs psi != 0 only
          const Expr rhs = substitute(pow(dphi, Rational(-n, 2)) * s.polynomial, {{"psi", b}});
          CAPTURE(emit(b));
          CHECK(same(b, rhs, dom));
        }
      }
    }
  }
}

TEST_SUITE("verify_solution") {
  TEST_CASE("npde solution passes") {
    const Expr candidate = P("(1 + (y-x))^(2/3)/2^(1/3)");
    const auto report = verify_solution(npde, P("y-x"), 1, candidate, npde_domain());
    CHECK(report.passed());
    CHECK(report.max_residual <= 1e-8);
  }

  TEST_CASE("ipde branches pass") {
    const SelfConsistentSolution s = solve_self_consistent(ipde, P("x-y+z"), 2, {integer(1), integer(1), integer(1)});
    for (const Expr& b : s.branches) CHECK(verify_solution(ipde, P("x-y+z"), 2, b, unit_box({"x", "y", "z"})).passed());
  }

  TEST_CASE("trivial solution") {
    CHECK(verify_solution(npde, P("y-x"), 1, integer(0), npde_domain()).passed());
  }

  TEST_CASE("linear candidates on the first example") {
    const SampleDomain dom = unit_box({"x", "y"});
    CHECK(verify_solution(e1, P("x/y"), 1, P("x"), dom).passed());
    const auto bad = verify_solution(e1, P("x/y"), 1, P("x^2"), dom);
    CHECK_FALSE(bad.passed());
    CHECK(bad.verdict == verify::Verdict::fail);
    CHECK(bad.max_abs_value == doctest::Approx(2.0));
  }

  TEST_CASE("wrong exponent fails") {
    const auto report = verify_solution(npde, P("y-x"), 1, P("(1 + (y-x))^(1/3)"), npde_domain());
    CHECK(report.verdict == verify::Verdict::fail);
  }
}

TEST_SUITE("theorem suite") {
  TEST_CASE("instances are deterministic and usable") {
    const TheoremInstance a = random_instance(5, 3, 4), b = random_instance(5, 3, 4);
    CHECK(a.describe() == b.describe());
    CHECK(a.vars.size() >= 1);
    CHECK(a.vars.size() <= 3);
    CHECK(a.n >= 0);
    CHECK(a.n <= 4);
    CHECK(random_instance(5, 3, 4, 2).n == 2);
    CHECK_THROWS_AS(random_instance(5, 0, 4), InvalidArgument);
  }

  TEST_CASE("small suite passes") {
    TheoremSuiteConfig config;
    config.max_dim = 2;
    config.max_n = 3;
    config.trials = 15;
    config.seed = 3;
    const TheoremSuiteResult r = run_theorem_suite(config);
    CHECK(r.instances == 15);
    CHECK(r.checks > 15);
    CHECK(r.passed == r.checks);
    CHECK(r.all_passed());
  }

  TEST_CASE("every nonzero factor flip is detected") {
    for (int n = 1; n <= 3; ++n) {
      for (int j = 0; j <= n; ++j) {
        if (2 * j == n) continue;  // zero coefficient: flipping it is the identity
        TheoremSuiteConfig config;
        config.max_dim = 2;
        config.fixed_n = n;
        config.trials = 3;
        config.mutation.flipped_factor = static_cast<std::size_t>(j);
        config.stop_on_failure = true;
        CAPTURE(n);
        CAPTURE(j);
        CHECK_FALSE(run_theorem_suite(config).all_passed());
      }
    }
  }

  TEST_CASE("corrupted pre-Schwarzian is detected") {
    TheoremSuiteConfig config;
    config.max_dim = 2;
    config.max_n = 2;
    config.trials = 5;
    config.mutation.corrupt_pre_schwarzian = true;
    config.stop_on_failure = true;
    CHECK_FALSE(run_theorem_suite(config).all_passed());
  }
}
