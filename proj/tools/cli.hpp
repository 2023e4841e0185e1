#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jitq/polynomial.hpp"
#include "jitq/scenario.hpp"

namespace jitq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitIo = 3;

/// Everything a solving command prints. The plan and cost are always derived
/// from `bits`, so a reader can recompute them.
struct RunReport {
  std::string command;
  std::optional<RouteScenario> scenario;
  std::string solver;
  std::vector<std::pair<std::string, std::string>> solver_config;
  double objective = 0.0;
  BitString bits;
  std::optional<DecodedPlan> plan;
  std::optional<CostBreakdown> cost;
  std::vector<std::pair<std::string, std::string>> details;
  double wall_seconds = 0.0;
};

std::string render_text(const RunReport& report);
std::string render_json(const RunReport& report);

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics and timing to `err`. Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jitq::cli
