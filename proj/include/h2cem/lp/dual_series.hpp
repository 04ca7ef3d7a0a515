#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "h2cem/lp/simplex.hpp"

namespace h2cem::lp {

class UnknownFamilyError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Shadow prices of one constraint family laid out by (scenario, hour).
/// Families indexed by scenario only ("rps[s]") have a single hour column.
/// Slots with no matching row hold nullopt rather than zero.
struct DualSeries {
  std::string family;
  Index scenarios = 0;
  Index hours = 0;
  std::vector<std::optional<double>> values;  // row-major by scenario

  const std::optional<double>& at(Index s, Index t = 0) const { return values[s * hours + t]; }
  Index present() const;
  /// Values of scenario `s`, absent slots as `fill`.
  Eigen::VectorXd scenario(Index s, double fill = 0) const;
};

/// Parses "<family>[s,t]" or "<family>[s]"; nullopt for other shapes.
struct ParsedName {
  std::string family;
  Index s = 0;
  Index t = -1;
};
std::optional<ParsedName> parse_indexed_name(std::string_view name);

/// Throws UnknownFamilyError when no constraint carries the prefix.
DualSeries dual_series(const Solution<double>& sol, std::string_view family);

}  // namespace h2cem::lp
