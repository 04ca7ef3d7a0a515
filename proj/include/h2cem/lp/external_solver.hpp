#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "h2cem/lp/simplex.hpp"

namespace h2cem::lp {

/// Backend program missing or unusable (exit status 77 from the wrapper).
class BackendUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Command line prefix; the MPS path and the solution path are appended.
struct ExternalSolver {
  std::string command;
  std::filesystem::path work_dir;
};

/// Writes `<work_dir>/<stem>.mps`, runs the backend and reads the solution
/// file back. Derived quantities (reduced costs, dual objective) are
/// recomputed from the LP so they match the embedded solver's definitions.
Solution<double> solve_external(const LinearProgramd& lp, const ExternalSolver& backend,
                                const std::string& stem = "model");

/// Parses `status`, `objective`, `primal <name> <v>` and `dual <name> <v>` lines.
Solution<double> read_solution_file(const std::filesystem::path& path, const LinearProgramd& lp);

}  // namespace h2cem::lp
