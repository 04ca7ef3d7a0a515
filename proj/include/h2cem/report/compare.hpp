#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "h2cem/analysis.hpp"

namespace h2cem::report {

enum class RunState { Complete, Partial };

struct RunRecord {
  std::string label;
  RunState state = RunState::Partial;
  std::string note;  ///< why a run is partial
  std::optional<analysis::CaseReport> report;
  std::string hash;
  std::uint64_t seed = 0;
};

/// Every run directory under `output_dir`, ordered by label. Directories
/// without a readable optimal report.json are returned as partial.
std::vector<RunRecord> collect_runs(const std::filesystem::path& output_dir);

struct ComparisonFiles {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> partial;  ///< labels flagged in the tables
};

/// emissions_by_case.csv, lcoh_by_case.csv, revenue_stacks.csv,
/// run_status.csv and, when `plots`, SVG charts, all under `dir`.
/// Tables have one column per run; LCOH deltas are taken against the
/// first complete run that produces H2.
ComparisonFiles write_comparison(const std::vector<RunRecord>& runs,
                                 const std::filesystem::path& dir, bool plots);

}  // namespace h2cem::report
