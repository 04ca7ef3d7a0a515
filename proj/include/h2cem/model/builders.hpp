#pragma once

#include "h2cem/model/variable_index.hpp"

// Each builder appends one constraint family to `lp`. Builders read the case
// and the column layout only, so their order fixes the row order.
namespace h2cem::model {

void build_balances(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp);
void build_thermal(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp);
void build_vre_and_storage(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp);
void build_h2_assets(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp);
void build_crm(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp);
void build_rps(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp);
void build_tmr(const SystemCase& c, const VariableIndex& v, const AssembleOptions& opts,
               lp::LinearProgramd& lp);
void build_objective(const SystemCase& c, const VariableIndex& v, Mode mode,
                     lp::LinearProgramd& lp);

/// Electrolyzer price per MW electric for a price quoted per MW of H2.
double per_mw_electric(double price_per_mw_h2, const H2ProjectSpec& h2);
/// Compressor price per tH2/h of charging capacity.
double per_tonne_hour(double price_per_mw_h2, const H2ProjectSpec& h2);

/// Hourly cost of fuel plus variable O&M for one MWh of generation.
double marginal_energy_cost(const SystemCase& c, const TechnologySpec& t);
/// Start-up cost per MW started.
double start_cost_per_mw(const SystemCase& c, const TechnologySpec& t);

}  // namespace h2cem::model
