#pragma once

#include <optional>
#include <string>
#include <vector>

#include "h2cem/domain.hpp"

namespace h2cem::runs {

enum class RunMode { Baseline, Deterministic, Stochastic, OosDispatch };

const char* to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

/// One entry of the experiment grid.
struct RunPlan {
  std::string label;
  RunMode mode = RunMode::Deterministic;
  /// Scenario labels; empty selects every scenario of the case.
  std::vector<std::string> scenarios;
  /// Explicit probabilities, parallel to `scenarios`; uniform when empty.
  std::vector<double> weights;
  /// Label of the design run whose capacities an oos_dispatch run fixes.
  std::string design;
  PolicyConfig policy;
  /// Tank limit in hours of peak H2 demand.
  std::optional<double> h2_store_hours;
};

/// Settings implied by the label convention:
///   No_H2 / baseline          no H2 project
///   D<n>-<X>[-<pct>][-<h>L]   deterministic on the n-th scenario (1-based)
///   S-<X>[-<pct>][-<h>L]      stochastic over all scenarios
/// with X in {N, A, H} for no, annual or hourly matching, <pct> the hourly
/// compliance percentage and <h> the tank limit in hours. A trailing
/// "-RPS<k>" sets the RPS share, and "RPS<k>_all" also covers H2 load.
/// Returns nullopt when the label does not follow the convention.
std::optional<RunPlan> plan_from_label(const std::string& label, const PolicyConfig& base,
                                       const std::vector<std::string>& scenario_labels);

}  // namespace h2cem::runs
