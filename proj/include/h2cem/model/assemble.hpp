#pragma once

#include "h2cem/lp/simplex.hpp"
#include "h2cem/model/builders.hpp"

namespace h2cem::model {

struct AssembledModel {
  lp::LinearProgramd lp;
  VariableIndex vars;
};

/// Runs every builder in a fixed order. Builder failures surface as
/// BuildError naming the failing family.
AssembledModel assemble(const SystemCase& c, const AssembleOptions& opts);

/// A case together with its column layout and solution.
struct SolvedCase {
  SystemCase system;
  VariableIndex vars;
  lp::Solution<double> solution;
  Mode mode = Mode::Deterministic;

  double value(lp::Index j) const { return j >= 0 ? solution.primal[j] : 0.0; }
};

}  // namespace h2cem::model
