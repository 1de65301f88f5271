#include "weiss/nullspace/theorem_suite.hpp"

#include <cmath>
#include <sstream>

#include "weiss/errors.hpp"
#include "weiss/expr/emit.hpp"
#include "weiss/expr/evaluate.hpp"
#include "weiss/expr/sampling.hpp"
#include "weiss/nullspace/null_functions.hpp"

namespace weiss::nullspace {

namespace {

using expr::Expr;

const char* const kVariableNames[] = {"x", "y", "z", "w"};

std::uint64_t below(expr::SplitMix64& rng, std::uint64_t bound) { return rng.next() % bound; }

// Random polynomial of total degree <= 2 with integer coefficients in [-2, 2].
Expr random_polynomial(expr::SplitMix64& rng, const std::vector<std::string>& vars) {
  std::vector<Expr> monomials{expr::integer(1)};
  for (std::size_t i = 0; i < vars.size(); ++i) {
    monomials.push_back(expr::variable(vars[i]));
    for (std::size_t j = i; j < vars.size(); ++j) {
      monomials.push_back(expr::variable(vars[i]) * expr::variable(vars[j]));
    }
  }
  std::vector<Expr> terms;
  for (const auto& m : monomials) {
    if (below(rng, 2) == 0) continue;
    const auto c = static_cast<std::int64_t>(below(rng, 5)) - 2;
    terms.push_back(expr::integer(c) * m);
  }
  return expr::sum(std::move(terms));
}

expr::SampleDomain unit_box(const std::vector<std::string>& vars) {
  expr::SampleDomain dom;
  for (const auto& v : vars) dom.add(v, 1.0, 2.0);
  return dom;
}

// +1 or -1 when D phi keeps that sign with margin on probe points of the
// box, 0 otherwise.
int sign_on_box(const Expr& d_phi, const std::vector<std::string>& vars, std::uint64_t seed) {
  const expr::SampleDomain dom = unit_box(vars);
  expr::SplitMix64 rng(seed);
  int sign = 0;
  for (int i = 0; i < 64 + (1 << vars.size()); ++i) {
    expr::Assignment a;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      // Corners first, then random interior points.
      a.values[vars[v]] = i < (1 << vars.size()) ? 1.0 + ((i >> v) & 1) : 1.0 + rng.uniform();
    }
    const double value = expr::evaluate(d_phi, a);
    const int s = value > 0.05 ? 1 : value < -0.05 ? -1 : 0;
    if (s == 0 || (sign != 0 && s != sign)) return 0;
    sign = s;
  }
  return sign;
}

std::string render_list(const std::vector<Expr>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + expr::emit(xs[i]);
  return out + "]";
}

}  // namespace

std::string TheoremInstance::describe() const {
  std::ostringstream os;
  os << "seed=" << seed << " n=" << n << " vars=[";
  for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << vars[i];
  os << "] coefficients=" << render_list(coeffs) << " phi=" << expr::emit(phi);
  return os.str();
}

TheoremInstance random_instance(std::uint64_t seed, int max_dim, int max_n, std::optional<int> fixed_n) {
  if (max_dim < 1 || max_dim > 4) throw InvalidArgument("dimension must lie in 1..4");
  if (max_n < 0) throw InvalidArgument("max_n must be non-negative");
  expr::SplitMix64 rng(seed);
  TheoremInstance inst;
  inst.seed = seed;
  const auto d = 1 + static_cast<std::size_t>(below(rng, static_cast<std::uint64_t>(max_dim)));
  for (std::size_t i = 0; i < d; ++i) inst.vars.emplace_back(kVariableNames[i]);
  inst.n = fixed_n ? *fixed_n : static_cast<int>(below(rng, static_cast<std::uint64_t>(max_n) + 1));

  for (int attempt = 0; attempt < 1000; ++attempt) {
    inst.coeffs.clear();
    for (std::size_t i = 0; i < d; ++i) inst.coeffs.push_back(random_polynomial(rng, inst.vars));
    inst.phi = random_polynomial(rng, inst.vars);
    const diffop::DirectionalOperator op(inst.vars, inst.coeffs);
    const Expr d_phi = op.apply(inst.phi, diffop::Simplification::light);
    const int sign = sign_on_box(d_phi, inst.vars, rng.next());
    if (sign == 0) continue;
    if (sign < 0) inst.phi = -inst.phi;
    return inst;
  }
  throw DomainExhausted("no usable random instance after 1000 draws");
}

TheoremSuiteResult run_theorem_suite(const TheoremSuiteConfig& config) {
  TheoremSuiteResult result;
  expr::SplitMix64 seeds(config.seed);
  for (std::size_t t = 0; t < config.trials; ++t) {
    const TheoremInstance inst = random_instance(seeds.next(), config.max_dim, config.max_n, config.fixed_n);
    ++result.instances;

    diffop::WeissOptions options;
    options.mutation = config.mutation;
    const diffop::DirectionalOperator op(inst.vars, inst.coeffs);
    const diffop::WeissOperator l = diffop::build_weiss(op, inst.phi, inst.n, options);

    expr::ZeroTestConfig zt;
    zt.domain = unit_box(inst.vars);
    zt.samples = config.samples;
    zt.tolerance = config.tolerance;
    zt.seed = inst.seed;

    auto record = [&](int k, const std::string& check, auto&& run) {
      ++result.checks;
      std::string detail;
      try {
        detail = run();
      } catch (const Error& e) {
        detail = e.what();
      }
      if (detail.empty()) {
        ++result.passed;
      } else {
        result.failures.push_back({inst, k, check, detail});
      }
    };

    const auto stop = [&] { return config.stop_on_failure && !result.failures.empty(); };
    const std::vector<Expr> b = basis(op, inst.phi, inst.n);
    for (int k = 0; k <= inst.n; ++k) {
      if (config.telescoping) {
        record(k, "telescoping", [&]() -> std::string {
          const TelescopingTrace trace = verify_telescoping(l, k, zt, config.mode);
          if (trace.passed) return "";
          return "intermediate " + std::to_string(trace.checks.size() - 1) + " residual " +
                 std::to_string(trace.checks.back().max_residual);
        });
        if (stop()) return result;
      }
      record(k, "annihilation", [&]() -> std::string {
        const auto r = expr::is_zero(l.apply(b[static_cast<std::size_t>(k)], config.mode), zt);
        return r.zero ? "" : "max residual " + std::to_string(r.max_residual);
      });
      if (stop()) return result;
    }
    record(-1, "superposition", [&]() -> std::string {
      std::vector<Expr> terms;
      for (const auto& f : b) {
        const auto num = static_cast<std::int64_t>(below(seeds, 9)) - 4;
        const auto den = 1 + static_cast<std::int64_t>(below(seeds, 3));
        terms.push_back(expr::rational(num, den) * f);
      }
      const auto r = expr::is_zero(l.apply(expr::sum(std::move(terms)), config.mode), zt);
      return r.zero ? "" : "max residual " + std::to_string(r.max_residual);
    });
  }
  return result;
}

}  // namespace weiss::nullspace
