#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2cem/analysis.hpp"
#include "h2cem/io/case_config.hpp"
#include "h2cem/model/assemble.hpp"
#include "h2cem/runs/plan.hpp"

namespace h2cem::runs {

/// Non-optimal solve; `lp_path` points at the model written for inspection.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& label, lp::SolveStatus status, std::filesystem::path lp_path)
      : std::runtime_error(label + ": solver returned " + lp::to_string(status) + " (model: " +
                           lp_path.string() + ")"),
        status_(status),
        lp_path_(std::move(lp_path)) {}
  lp::SolveStatus status() const { return status_; }
  const std::filesystem::path& lp_path() const { return lp_path_; }

 private:
  lp::SolveStatus status_;
  std::filesystem::path lp_path_;
};

/// Design and dispatch inputs that do not fit together.
class DesignMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SolverSettings {
  lp::SolverOptions<double> options;
  io::Backend backend = io::Backend::Embedded;
  std::string external_command;
  std::optional<std::filesystem::path> emit_lp_dir;  ///< MPS and LP text of every model
  std::filesystem::path scratch_dir = std::filesystem::temp_directory_path() / "h2cem";
};

/// Case for one plan: scenario selection and weights, policy, tank limit.
/// Baseline plans drop the H2 project, matching and PPA resources.
SystemCase materialize(const SystemCase& base, const RunPlan& plan);

/// Capacities of a solved design, in the form the dispatch harness fixes.
model::FirstStageValues extract_design(const model::SolvedCase& sc);
model::FirstStageValues design_from_report(const analysis::CaseReport& r);

/// Assembles and solves a baseline, deterministic or stochastic plan.
model::SolvedCase run_design(const SystemCase& base, const RunPlan& plan,
                             const SolverSettings& settings);

struct OosResult {
  std::vector<model::SolvedCase> per_scenario;
  /// All scenarios in one record (uniform weights), for reporting.
  model::SolvedCase combined;
};

/// One fixed-capacity dispatch LP per scenario of `plan`. An empty scenario
/// list selects every case scenario outside `design_scenarios`.
OosResult run_oos(const SystemCase& base, const RunPlan& plan, const model::FirstStageValues& design,
                  const std::vector<std::string>& design_scenarios, const SolverSettings& settings);

/// capacities.csv, dispatch.csv, duals.csv and report.json under `dir`.
void write_outputs(const model::SolvedCase& sc, const analysis::CaseReport& report,
                   const std::filesystem::path& dir, const std::string& hash, std::uint64_t seed);

/// Shell-style match supporting '*' and '?'.
bool glob_match(std::string_view pattern, std::string_view text);

struct ExecuteOptions {
  std::string labels = "*";
  bool force = false;
  int workers = 1;
  SolverSettings solver;
  std::function<void(const std::string&)> log;  ///< called under a lock
};

struct ExecuteSummary {
  std::vector<std::string> solved;
  std::vector<std::string> skipped;
  std::map<std::string, std::string> failed;  ///< label -> message
  bool any_solve_failure = false;
};

/// Runs the selected plans baseline first, then designs, then dispatch runs.
/// A label whose report.json carries the current hash and seed is skipped
/// unless `force`. Failures are collected, never thrown.
ExecuteSummary execute(const io::ProjectConfig& cfg, const ExecuteOptions& opts);

}  // namespace h2cem::runs
