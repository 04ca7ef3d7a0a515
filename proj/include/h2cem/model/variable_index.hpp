#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2cem/domain.hpp"
#include "h2cem/lp/linear_program.hpp"

namespace h2cem::model {

enum class Mode { Deterministic, Stochastic, OutOfSample };

const char* to_string(Mode m);

/// First-stage decisions keyed by technology id. Electrolyzer capacity is
/// MW electric, compressor capacity tH2/h of charging, tank tonnes.
struct FirstStageValues {
  std::map<std::string, double> new_power;
  std::map<std::string, double> new_energy;
  std::map<std::string, double> retired_power;
  std::map<std::string, double> retired_energy;
  double electrolyzer_mw = 0;
  double h2_storage_tonnes = 0;
  double compressor_tph = 0;
};

struct AssembleOptions {
  Mode mode = Mode::Deterministic;
  /// Capacities pinned through variable bounds (out-of-sample dispatch).
  std::optional<FirstStageValues> fixed;
  /// Penalized slack on the hourly matching rows.
  bool tmr_slack = false;
};

/// Thrown by a constraint builder; `builder` names the family that failed.
class BuildError : public std::runtime_error {
 public:
  BuildError(std::string builder, const std::string& what)
      : std::runtime_error(builder + ": " + what), builder_(std::move(builder)) {}
  const std::string& builder() const { return builder_; }

 private:
  std::string builder_;
};

/// Contiguous scenario-by-hour block of LP columns.
struct Block {
  lp::Index base = -1;
  lp::Index hours = 0;
  bool present() const { return base >= 0; }
  lp::Index operator()(lp::Index s, lp::Index t) const { return base + s * hours + t; }
};

struct TechVars {
  lp::Index cap_new = -1;
  lp::Index cap_new_energy = -1;
  lp::Index cap_retired = -1;
  lp::Index cap_retired_energy = -1;
  Block gen;
  Block commit, start, shut;             // thermal
  Block charge, discharge, soc;          // battery
};

/// Column layout of an assembled case. Every (resource, scenario, hour)
/// triple owns exactly one column per family.
struct VariableIndex {
  lp::Index scenarios = 0;
  lp::Index hours = 0;
  std::vector<TechVars> tech;  ///< parallel to SystemCase::technologies
  lp::Index electrolyzer_cap = -1;
  lp::Index h2_storage_cap = -1;
  lp::Index compressor_cap = -1;
  Block h2_gen, h2_charge, h2_discharge, h2_soc;
  Block nse_power, nse_h2;
  Block tmr_slack;
  std::vector<lp::Index> rps_slack;

  lp::Index prev(lp::Index t) const { return t == 0 ? hours - 1 : t - 1; }
};

/// "<family>[s,t]" and "<family>[s]".
std::string indexed(const std::string& family, lp::Index s, lp::Index t);
std::string indexed(const std::string& family, lp::Index s);

/// Creates every column with its bounds (costs are set by build_objective).
VariableIndex make_variable_index(const SystemCase& c, const AssembleOptions& opts,
                                  lp::LinearProgramd& lp);

}  // namespace h2cem::model
