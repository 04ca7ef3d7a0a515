#include "h2cem/model/assemble.hpp"

namespace h2cem::model {

AssembledModel assemble(const SystemCase& c, const AssembleOptions& opts) {
  AssembledModel m;
  if (opts.mode == Mode::OutOfSample && !opts.fixed)
    throw BuildError("assemble", "out-of-sample mode needs fixed first-stage values");
  if (c.scenarios.empty()) throw BuildError("assemble", "no weather scenarios");
  try {
    m.vars = make_variable_index(c, opts, m.lp);
  } catch (const lp::DuplicateNameError& e) {
    throw BuildError("variables", e.what());
  }
  build_balances(c, m.vars, m.lp);
  build_thermal(c, m.vars, m.lp);
  build_vre_and_storage(c, m.vars, m.lp);
  build_h2_assets(c, m.vars, m.lp);
  build_crm(c, m.vars, m.lp);
  build_rps(c, m.vars, m.lp);
  build_tmr(c, m.vars, opts, m.lp);
  build_objective(c, m.vars, opts.mode, m.lp);
  return m;
}

}  // namespace h2cem::model
