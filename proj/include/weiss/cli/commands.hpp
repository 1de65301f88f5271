#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weiss/cli/problem.hpp"
#include "weiss/expr/emit.hpp"

namespace weiss::cli {

/// Every run ends with one of these.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInvalid = 2,
  kExitDegenerate = 3,
  kExitPattern = 4,
  kExitInconclusive = 5,
};

struct CommandOptions {
  expr::Format format = expr::Format::plain;
  bool paper_form = false;
  std::optional<double> tolerance;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> candidate;
  /// Include per-point lines in verification reports.
  bool show_points = false;
};

struct TheoremCheckOptions {
  int dims = 3;
  int max_n = 4;
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  double tolerance = 1e-7;
  std::optional<std::size_t> mutate_factor;
  bool mutate_v = false;
};

struct CommandResult {
  std::string command;
  int exit_code = kExitPass;
  std::string verdict = "pass";
  /// Human-readable output.
  std::string text;
  std::vector<std::string> rendered;
  std::optional<double> max_residual;
  std::optional<double> tolerance;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;

  /// {command, verdict, max_residual, tolerance, samples, seed, rendered_expressions}.
  nlohmann::ordered_json machine() const;
};

CommandResult emit_operator(const Problem& p, const CommandOptions& o);
CommandResult emit_pde(const Problem& p, const CommandOptions& o);
CommandResult solve(const Problem& p, const CommandOptions& o);
CommandResult verify(const Problem& p, const CommandOptions& o);
CommandResult theorem_check(const TheoremCheckOptions& o);

/// Runs body, turning toolkit exceptions into the matching exit code with
/// the message as text.
CommandResult guarded(const std::string& command, const std::function<CommandResult()>& body);

}  // namespace weiss::cli
