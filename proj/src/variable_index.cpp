#include "h2cem/model/variable_index.hpp"

#include <algorithm>

namespace h2cem::model {

using lp::infinity;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Deterministic: return "deterministic";
    case Mode::Stochastic: return "stochastic";
    case Mode::OutOfSample: return "oos_dispatch";
  }
  return "?";
}

std::string indexed(const std::string& family, lp::Index s, lp::Index t) {
  std::string out;
  out.reserve(family.size() + 16);
  out += family;
  out += '[';
  out += std::to_string(s);
  out += ',';
  out += std::to_string(t);
  out += ']';
  return out;
}

std::string indexed(const std::string& family, lp::Index s) {
  return family + "[" + std::to_string(s) + "]";
}

namespace {

Block add_block(lp::LinearProgramd& lp, const std::string& family, lp::Index scenarios,
                lp::Index hours, double lower = 0, double upper = infinity<double>()) {
  Block b{lp.num_variables(), hours};
  for (lp::Index s = 0; s < scenarios; ++s)
    for (lp::Index t = 0; t < hours; ++t) lp.add_variable(indexed(family, s, t), lower, upper);
  return b;
}

double lookup(const std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

// Adds a first-stage column, pinned to `fixed` when given.
lp::Index add_first_stage(lp::LinearProgramd& lp, const std::string& name, double upper,
                          std::optional<double> fixed) {
  if (fixed) {
    const double v = std::clamp(*fixed, 0.0, upper);
    return lp.add_variable(name, v, v);
  }
  return lp.add_variable(name, 0, upper);
}

}  // namespace

VariableIndex make_variable_index(const SystemCase& c, const AssembleOptions& opts,
                                  lp::LinearProgramd& lp) {
  VariableIndex v;
  v.scenarios = static_cast<lp::Index>(c.scenarios.size());
  v.hours = c.hours();
  const lp::Index S = v.scenarios, T = v.hours;
  const FirstStageValues* fix = opts.fixed ? &*opts.fixed : nullptr;
  auto pinned = [&](const std::map<std::string, double> FirstStageValues::*field,
                    const std::string& id) -> std::optional<double> {
    if (!fix) return std::nullopt;
    return lookup(fix->*field, id);
  };

  v.tech.resize(c.technologies.size());
  for (std::size_t k = 0; k < c.technologies.size(); ++k) {
    const auto& t = c.technologies[k];
    auto& tv = v.tech[k];
    if (t.expandable) {
      tv.cap_new = add_first_stage(lp, "cap_new_" + t.id, infinity<double>(),
                                   pinned(&FirstStageValues::new_power, t.id));
      if (t.is_storage())
        tv.cap_new_energy = add_first_stage(lp, "cap_new_energy_" + t.id, infinity<double>(),
                                            pinned(&FirstStageValues::new_energy, t.id));
    }
    if (t.retirable && !fix) {
      tv.cap_retired = lp.add_variable("cap_ret_" + t.id, 0, t.existing_capacity);
      if (t.is_storage())
        tv.cap_retired_energy = lp.add_variable("cap_ret_energy_" + t.id, 0, t.existing_energy);
    } else if (t.retirable) {
      // Out-of-sample runs keep the retired amount fixed at the design value.
      tv.cap_retired = add_first_stage(lp, "cap_ret_" + t.id, t.existing_capacity,
                                       pinned(&FirstStageValues::retired_power, t.id));
      if (t.is_storage())
        tv.cap_retired_energy =
            add_first_stage(lp, "cap_ret_energy_" + t.id, t.existing_energy,
                            pinned(&FirstStageValues::retired_energy, t.id));
    }
  }

  if (c.h2_project) {
    const auto& h = *c.h2_project;
    auto fixed_or = [&](double FirstStageValues::*field) -> std::optional<double> {
      if (!fix) return std::nullopt;
      return fix->*field;
    };
    v.electrolyzer_cap = add_first_stage(lp, "ely_cap", infinity<double>(),
                                         fixed_or(&FirstStageValues::electrolyzer_mw));
    v.h2_storage_cap =
        add_first_stage(lp, "h2_store_cap", h.h2_store_cap_limit.value_or(infinity<double>()),
                        fixed_or(&FirstStageValues::h2_storage_tonnes));
    v.compressor_cap = add_first_stage(lp, "compressor_cap", infinity<double>(),
                                       fixed_or(&FirstStageValues::compressor_tph));
  }

  for (std::size_t k = 0; k < c.technologies.size(); ++k) {
    const auto& t = c.technologies[k];
    auto& tv = v.tech[k];
    if (t.is_storage()) {
      tv.charge = add_block(lp, "charge_" + t.id, S, T);
      tv.discharge = add_block(lp, "discharge_" + t.id, S, T);
      tv.soc = add_block(lp, "soc_level_" + t.id, S, T);
      continue;
    }
    tv.gen = add_block(lp, "gen_" + t.id, S, T);
    if (t.kind == TechKind::Thermal) {
      tv.commit = add_block(lp, "commit_level_" + t.id, S, T);
      tv.start = add_block(lp, "start_" + t.id, S, T);
      tv.shut = add_block(lp, "shut_" + t.id, S, T);
    }
  }

  if (c.h2_project) {
    v.h2_gen = add_block(lp, "h2_gen", S, T);
    v.h2_charge = add_block(lp, "h2_charge", S, T);
    v.h2_discharge = add_block(lp, "h2_discharge", S, T);
    v.h2_soc = add_block(lp, "h2_soc_level", S, T);
  }

  v.nse_power = Block{lp.num_variables(), T};
  for (lp::Index s = 0; s < S; ++s)
    for (lp::Index t = 0; t < T; ++t)
      lp.add_variable(indexed("nse_power", s, t), 0, c.demand.grid_load[t]);
  if (c.h2_project) {
    v.nse_h2 = Block{lp.num_variables(), T};
    for (lp::Index s = 0; s < S; ++s)
      for (lp::Index t = 0; t < T; ++t)
        lp.add_variable(indexed("nse_h2", s, t), 0, c.demand.h2_demand[t]);
  }

  if (c.policy.rps_kappa)
    for (lp::Index s = 0; s < S; ++s)
      v.rps_slack.push_back(lp.add_variable(indexed("rps_slack", s)));

  if (opts.tmr_slack && c.policy.tmr == TmrKind::Hourly)
    v.tmr_slack = add_block(lp, "tmr_slack", S, T);

  return v;
}

}  // namespace h2cem::model
