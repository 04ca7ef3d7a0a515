#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "h2cem/domain.hpp"
#include "h2cem/runs/plan.hpp"

namespace h2cem::io {

/// Malformed configuration; the message carries a line or field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend { Embedded, External };

struct SolverConfig {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  Backend backend = Backend::Embedded;
  std::string external_command;  ///< program reading an MPS file, writing a solution file
  bool external_provides_duals = true;
};

struct ProjectConfig {
  std::filesystem::path source;
  SystemCase base;
  std::vector<runs::RunPlan> runs;
  SolverConfig solver;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;  ///< over the config text and every data file it references
  int workers = 0;         ///< 0 picks the hardware concurrency
  bool plots = true;
};

/// Parses a case and its run manifest. Relative paths resolve against the
/// config file's directory. Throws ConfigError or IoError.
ProjectConfig load_config(const std::filesystem::path& path);

/// Case definition alone, from JSON text.
SystemCase parse_case(std::string_view json_text, const std::filesystem::path& root);

/// Policy block with the defaults applied; `hourly` defaults beta to 0.2
/// unless the key is present (null disables the cap).
PolicyConfig parse_policy(std::string_view json_text);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ull);
std::string hex64(std::uint64_t v);

}  // namespace h2cem::io
