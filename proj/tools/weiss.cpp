#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weiss/cli/commands.hpp"
#include "weiss/errors.hpp"

namespace {

using weiss::cli::CommandOptions;
using weiss::cli::CommandResult;

// VAR:LO:HI
weiss::expr::Interval parse_domain_flag(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw weiss::InvalidArgument("--domain expects VAR:LO:HI, got '" + text + "'");
  try {
    return {text.substr(0, a), std::stod(text.substr(a + 1, b - a - 1)), std::stod(text.substr(b + 1))};
  } catch (const std::exception&) {
    throw weiss::InvalidArgument("--domain expects numeric bounds, got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Weiss operators: construction, null functions and numeric verification"};
  app.require_subcommand(1);

  std::string problem_path;
  std::string format = "plain";
  bool paper_form = false;
  bool machine = false;
  bool show_points = false;
  double tol = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string candidate;
  std::vector<std::string> domains;

  weiss::cli::TheoremCheckOptions theorem;
  std::size_t mutate_factor = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", problem_path, "Problem file")->required();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"plain", "latex"}));
    sub->add_option("--tol", tol, "Residual tolerance");
    sub->add_option("--samples", samples, "Sample points per check");
    sub->add_option("--seed", seed, "Sampling seed");
    sub->add_option("--domain", domains, "Sampling interval VAR:LO:HI (repeatable)");
    sub->add_flag("--machine", machine, "Print one JSON record");
  };

  CLI::App* emit_operator = app.add_subcommand("emit-operator", "Print D(phi), V, Q and the factor list");
  add_common(emit_operator);
  CLI::App* emit_pde = app.add_subcommand("emit-pde", "Print the expanded PDE L psi");
  add_common(emit_pde);
  emit_pde->add_flag("--paper-form", paper_form, "Divide out the common power of the unknown");
  CLI::App* solve = app.add_subcommand("solve", "Print the null function or the self-consistent branches");
  add_common(solve);
  CLI::App* verify = app.add_subcommand("verify", "Check a candidate against the PDE at random points");
  add_common(verify);
  verify->add_option("--candidate", candidate, "Expression to verify instead of the solve output");
  verify->add_flag("--show-points", show_points, "List every sample point and residual");

  CLI::App* theorem_check = app.add_subcommand("theorem-check", "Randomized check of the null-function family");
  theorem_check->add_option("--dims", theorem.dims, "Largest dimension (1..4)");
  theorem_check->add_option("--max-n", theorem.max_n, "Largest operator index n (0..8)");
  theorem_check->add_option("--trials", theorem.trials, "Number of random instances");
  theorem_check->add_option("--seed", theorem.seed, "Suite seed");
  theorem_check->add_option("--tol", theorem.tolerance, "Residual tolerance");
  theorem_check->add_flag("--machine", machine, "Print one JSON record");
  theorem_check->add_option("--mutate-factor", mutate_factor)->group("");
  theorem_check->add_flag("--mutate-v", theorem.mutate_v)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : weiss::cli::kExitInvalid;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  const CommandResult result = weiss::cli::guarded(command, [&]() -> CommandResult {
    if (chosen == theorem_check) {
      if (theorem_check->count("--mutate-factor") > 0) theorem.mutate_factor = mutate_factor;
      return weiss::cli::theorem_check(theorem);
    }
    weiss::cli::ProblemSpec spec = weiss::cli::load_problem(problem_path);
    for (const auto& d : domains) spec.domain.push_back(parse_domain_flag(d));
    const weiss::cli::Problem problem = weiss::cli::compile(spec);

    CommandOptions options;
    options.format = format == "latex" ? weiss::expr::Format::latex : weiss::expr::Format::plain;
    options.paper_form = paper_form;
    options.show_points = show_points;
    if (chosen->count("--tol") > 0) options.tolerance = tol;
    if (chosen->count("--samples") > 0) options.samples = samples;
    if (chosen->count("--seed") > 0) options.seed = seed;
    if (chosen == verify && verify->count("--candidate") > 0) options.candidate = candidate;

    if (chosen == emit_operator) return weiss::cli::emit_operator(problem, options);
    if (chosen == emit_pde) return weiss::cli::emit_pde(problem, options);
    if (chosen == solve) return weiss::cli::solve(problem, options);
    return weiss::cli::verify(problem, options);
  });

  if (machine) {
    std::cout << result.machine().dump() << '\n';
  } else if (result.exit_code == weiss::cli::kExitPass || result.verdict != "error") {
    std::cout << result.text;
  } else {
    std::cerr << result.text;
  }
  return result.exit_code;
}
