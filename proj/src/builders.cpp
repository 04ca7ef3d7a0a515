#include "h2cem/model/builders.hpp"

#include <algorithm>
#include <cmath>

namespace h2cem::model {

using lp::Sense;
using Term = lp::Term<double>;

namespace {

struct Row {
  std::vector<Term> terms;
  double rhs = 0;

  void add(lp::Index j, double a) {
    if (j >= 0 && a != 0) terms.push_back({j, a});
  }
  // scale * (existing - retired + new); the constant moves to the rhs.
  void add_installed(const TechnologySpec& spec, const TechVars& tv, double scale) {
    add(tv.cap_new, scale);
    add(tv.cap_retired, -scale);
    rhs -= scale * spec.existing_capacity;
  }
  void add_installed_energy(const TechnologySpec& spec, const TechVars& tv, double scale) {
    add(tv.cap_new_energy, scale);
    add(tv.cap_retired_energy, -scale);
    rhs -= scale * spec.existing_energy;
  }
  void emit(lp::LinearProgramd& lp, std::string name, Sense sense) {
    lp.add_constraint(std::move(name), std::move(terms), sense, rhs);
    terms.clear();
    rhs = 0;
  }
};

const Series& profile(const SystemCase& c, std::size_t s, const TechnologySpec& t,
                      const char* builder) {
  const auto& groups = c.scenarios[s].cf_by_group;
  auto it = groups.find(t.profile);
  if (it == groups.end())
    throw BuildError(builder, "scenario " + c.scenarios[s].year_label + " has no cf series '" +
                                  t.profile + "' for technology " + t.id);
  if (it->second.size() != c.hours())
    throw BuildError(builder, "cf series '" + t.profile + "' has wrong length");
  return it->second;
}

bool rps_eligible(const TechnologySpec& t) {
  return t.is_rps_eligible && !t.is_ppa_eligible && !t.is_storage();
}

}  // namespace

double per_mw_electric(double price_per_mw_h2, const H2ProjectSpec& h2) {
  return price_per_mw_h2 * h2.h2_lhv / h2.electrolyzer_power_per_tonne;
}

double per_tonne_hour(double price_per_mw_h2, const H2ProjectSpec& h2) {
  return price_per_mw_h2 * h2.h2_lhv;
}

double marginal_energy_cost(const SystemCase& c, const TechnologySpec& t) {
  double cost = t.vom;
  if (t.fuel_id)
    if (const FuelSpec* f = c.find_fuel(*t.fuel_id)) cost += f->price * t.heat_rate;
  return cost;
}

double start_cost_per_mw(const SystemCase& c, const TechnologySpec& t) {
  if (!(t.unit_size > 0)) return 0;
  double per_start = t.start_cost;
  if (t.fuel_id)
    if (const FuelSpec* f = c.find_fuel(*t.fuel_id)) per_start += t.start_fuel * f->price;
  return per_start / t.unit_size;
}

void build_balances(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp) {
  if (c.demand.grid_load.size() != v.hours || v.hours == 0)
    throw BuildError("balances", "missing grid_load series");
  if (c.h2_project && c.demand.h2_demand.size() != v.hours)
    throw BuildError("balances", "missing h2_demand series");
  Row r;
  for (lp::Index s = 0; s < v.scenarios; ++s) {
    for (lp::Index t = 0; t < v.hours; ++t) {
      for (std::size_t k = 0; k < c.technologies.size(); ++k) {
        const auto& tv = v.tech[k];
        if (tv.gen.present()) r.add(tv.gen(s, t), 1);
        if (tv.discharge.present()) {
          r.add(tv.discharge(s, t), 1);
          r.add(tv.charge(s, t), -1);
        }
      }
      r.add(v.nse_power(s, t), 1);
      if (c.h2_project) {
        r.add(v.h2_gen(s, t), -c.h2_project->electrolyzer_power_per_tonne);
        r.add(v.h2_charge(s, t), -c.h2_project->compressor_power_per_tonne);
      }
      r.rhs = c.demand.grid_load[t];
      r.emit(lp, indexed("power_balance", s, t), Sense::Equal);
    }
  }
  if (!c.h2_project) return;
  for (lp::Index s = 0; s < v.scenarios; ++s) {
    for (lp::Index t = 0; t < v.hours; ++t) {
      r.add(v.h2_gen(s, t), 1);
      r.add(v.h2_discharge(s, t), 1);
      r.add(v.h2_charge(s, t), -1);
      r.add(v.nse_h2(s, t), 1);
      r.rhs = c.demand.h2_demand[t];
      r.emit(lp, indexed("h2_balance", s, t), Sense::Equal);
    }
  }
}

void build_thermal(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp) {
  Row r;
  for (std::size_t k = 0; k < c.technologies.size(); ++k) {
    const auto& spec = c.technologies[k];
    if (spec.kind != TechKind::Thermal) continue;
    if (spec.min_stable_fraction > 1 || spec.min_stable_fraction < 0)
      throw BuildError("thermal", "min_stable_fraction of " + spec.id + " outside [0, 1]");
    const auto& tv = v.tech[k];
    const std::string& id = spec.id;
    for (lp::Index s = 0; s < v.scenarios; ++s) {
      for (lp::Index t = 0; t < v.hours; ++t) {
        const lp::Index p = v.prev(t);
        r.add(tv.commit(s, t), 1);
        r.add_installed(spec, tv, -spec.max_availability);
        r.emit(lp, indexed("cap_" + id, s, t), Sense::LessEqual);

        r.add(tv.gen(s, t), 1);
        r.add(tv.commit(s, t), -1);
        r.emit(lp, indexed("gen_max_" + id, s, t), Sense::LessEqual);

        r.add(tv.gen(s, t), 1);
        r.add(tv.commit(s, t), -spec.min_stable_fraction);
        r.emit(lp, indexed("gen_min_" + id, s, t), Sense::GreaterEqual);

        r.add(tv.commit(s, t), 1);
        r.add(tv.commit(s, p), -1);
        r.add(tv.start(s, t), -1);
        r.add(tv.shut(s, t), 1);
        r.emit(lp, indexed("commit_" + id, s, t), Sense::Equal);

        r.add(tv.gen(s, t), 1);
        r.add(tv.gen(s, p), -1);
        r.add(tv.commit(s, t), -spec.ramp_up);
        r.emit(lp, indexed("ramp_up_" + id, s, t), Sense::LessEqual);

        r.add(tv.gen(s, p), 1);
        r.add(tv.gen(s, t), -1);
        r.add(tv.commit(s, p), -spec.ramp_down);
        r.emit(lp, indexed("ramp_down_" + id, s, t), Sense::LessEqual);
      }
    }
  }
}

void build_vre_and_storage(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp) {
  Row r;
  for (std::size_t k = 0; k < c.technologies.size(); ++k) {
    const auto& spec = c.technologies[k];
    const auto& tv = v.tech[k];
    const std::string& id = spec.id;

    if (spec.kind == TechKind::Vre || spec.kind == TechKind::Hydro ||
        spec.kind == TechKind::NuclearLike) {
      for (lp::Index s = 0; s < v.scenarios; ++s) {
        const Series* cf = spec.has_profile() ? &profile(c, s, spec, "vre_and_storage") : nullptr;
        if (cf && (cf->minCoeff() < 0 || cf->maxCoeff() > 1))
          throw BuildError("vre_and_storage", "cf series '" + spec.profile + "' outside [0, 1]");
        for (lp::Index t = 0; t < v.hours; ++t) {
          const double avail = cf ? (*cf)[t] : spec.max_availability;
          r.add(tv.gen(s, t), 1);
          r.add_installed(spec, tv, -avail);
          r.emit(lp, indexed("avail_" + id, s, t), Sense::LessEqual);
          if (spec.kind != TechKind::Vre && spec.min_stable_fraction > 0) {
            r.add(tv.gen(s, t), 1);
            r.add_installed(spec, tv, -std::min(spec.min_stable_fraction, avail));
            r.emit(lp, indexed("gen_min_" + id, s, t), Sense::GreaterEqual);
          }
          if (spec.kind != TechKind::Vre && spec.ramp_up < 1) {
            r.add(tv.gen(s, t), 1);
            r.add(tv.gen(s, v.prev(t)), -1);
            r.add_installed(spec, tv, -spec.ramp_up);
            r.emit(lp, indexed("ramp_up_" + id, s, t), Sense::LessEqual);
          }
          if (spec.kind != TechKind::Vre && spec.ramp_down < 1) {
            r.add(tv.gen(s, v.prev(t)), 1);
            r.add(tv.gen(s, t), -1);
            r.add_installed(spec, tv, -spec.ramp_down);
            r.emit(lp, indexed("ramp_down_" + id, s, t), Sense::LessEqual);
          }
        }
      }
      continue;
    }
    if (!spec.is_storage()) continue;

    for (lp::Index s = 0; s < v.scenarios; ++s) {
      for (lp::Index t = 0; t < v.hours; ++t) {
        r.add(tv.soc(s, t), 1);
        r.add(tv.soc(s, v.prev(t)), -(1 - spec.self_discharge));
        r.add(tv.charge(s, t), -spec.charge_efficiency);
        r.add(tv.discharge(s, t), 1 / spec.discharge_efficiency);
        r.emit(lp, indexed("soc_" + id, s, t), Sense::Equal);

        r.add(tv.soc(s, t), 1);
        r.add_installed_energy(spec, tv, -1);
        r.emit(lp, indexed("soc_max_" + id, s, t), Sense::LessEqual);

        r.add(tv.charge(s, t), 1);
        r.add_installed(spec, tv, -1);
        r.emit(lp, indexed("charge_max_" + id, s, t), Sense::LessEqual);

        r.add(tv.discharge(s, t), 1);
        r.add_installed(spec, tv, -1);
        r.emit(lp, indexed("discharge_max_" + id, s, t), Sense::LessEqual);
      }
    }
    if (tv.cap_new >= 0 || tv.cap_new_energy >= 0 || tv.cap_retired >= 0 ||
        tv.cap_retired_energy >= 0) {
      r.add_installed_energy(spec, tv, 1);
      r.add_installed(spec, tv, -spec.duration_min);
      r.emit(lp, "duration_min_" + id, Sense::GreaterEqual);
      r.add_installed_energy(spec, tv, 1);
      r.add_installed(spec, tv, -spec.duration_max);
      r.emit(lp, "duration_max_" + id, Sense::LessEqual);
    }
  }
}

void build_h2_assets(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp) {
  if (!c.h2_project) {
    if (c.policy.tmr != TmrKind::None)
      throw BuildError("h2_assets", "time matching requested without an h2_project");
    return;
  }
  const auto& h = *c.h2_project;
  const double lambda = h.electrolyzer_power_per_tonne;
  Row r;
  for (lp::Index s = 0; s < v.scenarios; ++s) {
    for (lp::Index t = 0; t < v.hours; ++t) {
      const lp::Index p = v.prev(t);
      r.add(v.h2_gen(s, t), 1);
      r.add(v.electrolyzer_cap, -h.electrolyzer_availability / lambda);
      r.emit(lp, indexed("ely_max", s, t), Sense::LessEqual);
      if (h.electrolyzer_min_output_fraction > 0) {
        r.add(v.h2_gen(s, t), 1);
        r.add(v.electrolyzer_cap, -h.electrolyzer_min_output_fraction / lambda);
        r.emit(lp, indexed("ely_min", s, t), Sense::GreaterEqual);
      }
      if (h.electrolyzer_ramp < 1) {
        r.add(v.h2_gen(s, t), 1);
        r.add(v.h2_gen(s, p), -1);
        r.add(v.electrolyzer_cap, -h.electrolyzer_ramp / lambda);
        r.emit(lp, indexed("ely_ramp_up", s, t), Sense::LessEqual);
        r.add(v.h2_gen(s, p), 1);
        r.add(v.h2_gen(s, t), -1);
        r.add(v.electrolyzer_cap, -h.electrolyzer_ramp / lambda);
        r.emit(lp, indexed("ely_ramp_down", s, t), Sense::LessEqual);
      }

      r.add(v.h2_soc(s, t), 1);
      r.add(v.h2_soc(s, p), -1);
      r.add(v.h2_charge(s, t), -h.storage_charge_efficiency);
      r.add(v.h2_discharge(s, t), 1 / h.storage_discharge_efficiency);
      r.emit(lp, indexed("h2_soc", s, t), Sense::Equal);

      r.add(v.h2_soc(s, t), 1);
      r.add(v.h2_storage_cap, -1);
      r.emit(lp, indexed("h2_soc_max", s, t), Sense::LessEqual);

      r.add(v.h2_charge(s, t), 1);
      r.add(v.compressor_cap, -1);
      r.emit(lp, indexed("h2_charge_max", s, t), Sense::LessEqual);
    }
  }
}

void build_crm(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp) {
  const double alpha = c.policy.crm_alpha;
  Row r;
  for (lp::Index s = 0; s < v.scenarios; ++s) {
    std::vector<const Series*> cf(c.technologies.size(), nullptr);
    for (std::size_t k = 0; k < c.technologies.size(); ++k)
      if (c.technologies[k].has_profile() && !c.technologies[k].is_ppa_eligible)
        cf[k] = &profile(c, s, c.technologies[k], "crm");
    for (lp::Index t = 0; t < v.hours; ++t) {
      for (std::size_t k = 0; k < c.technologies.size(); ++k) {
        const auto& spec = c.technologies[k];
        const auto& tv = v.tech[k];
        if (spec.is_ppa_eligible || spec.crm_derate == 0) continue;
        if (spec.is_storage()) {
          r.add(tv.discharge(s, t), spec.crm_derate);
          r.add(tv.charge(s, t), -spec.crm_derate);
        } else {
          r.add_installed(spec, tv, spec.crm_derate * (cf[k] ? (*cf[k])[t] : 1.0));
        }
      }
      if (c.h2_project)
        r.add(v.h2_gen(s, t),
              -c.h2_project->crm_derate * c.h2_project->electrolyzer_power_per_tonne);
      // Shed load also sheds its reserve requirement.
      r.add(v.nse_power(s, t), 1 + alpha);
      r.rhs += (1 + alpha) * c.demand.grid_load[t];
      r.emit(lp, indexed("crm", s, t), Sense::GreaterEqual);
    }
  }
}

void build_rps(const SystemCase& c, const VariableIndex& v, lp::LinearProgramd& lp) {
  if (!c.policy.rps_kappa) return;
  const double kappa = *c.policy.rps_kappa;
  bool any = false;
  for (const auto& t : c.technologies) any = any || rps_eligible(t);
  if (!any && kappa > 0 && !(c.policy.penalties.rps_slack > 0))
    throw BuildError("rps", "rps_kappa set with no eligible resource and zero slack penalty");
  Row r;
  for (lp::Index s = 0; s < v.scenarios; ++s) {
    for (std::size_t k = 0; k < c.technologies.size(); ++k) {
      if (!rps_eligible(c.technologies[k])) continue;
      for (lp::Index t = 0; t < v.hours; ++t) r.add(v.tech[k].gen(s, t), 1);
    }
    r.add(v.rps_slack[s], 1);
    if (c.policy.rps_covers_h2 && c.h2_project) {
      for (lp::Index t = 0; t < v.hours; ++t) {
        r.add(v.h2_gen(s, t), -kappa * c.h2_project->electrolyzer_power_per_tonne);
        r.add(v.h2_charge(s, t), -kappa * c.h2_project->compressor_power_per_tonne);
      }
    }
    r.rhs = kappa * c.demand.grid_load.sum();
    r.emit(lp, indexed("rps", s), Sense::GreaterEqual);
  }
}

void build_tmr(const SystemCase& c, const VariableIndex& v, const AssembleOptions& opts,
               lp::LinearProgramd& lp) {
  const auto& pol = c.policy;
  if (pol.tmr == TmrKind::None) return;
  if (!c.h2_project) throw BuildError("tmr", "time matching requested without an h2_project");
  if (pol.tmr == TmrKind::Annual && opts.tmr_slack)
    throw BuildError("tmr", "tmr_slack is not supported with annual time matching");
  std::vector<std::size_t> ppa;
  for (std::size_t k = 0; k < c.technologies.size(); ++k)
    if (c.technologies[k].is_ppa_eligible) ppa.push_back(k);
  if (ppa.empty()) throw BuildError("tmr", "time matching requires a PPA-eligible resource");

  const auto& h = *c.h2_project;
  const double lambda = h.electrolyzer_power_per_tonne;
  const double comp = pol.tmr_includes_compressor ? h.compressor_power_per_tonne : 0.0;
  Row r;
  // Matched supply in hour t, scaled by `scale`.
  auto add_supply = [&](lp::Index s, lp::Index t, double scale) {
    for (std::size_t k : ppa) {
      const auto& tv = v.tech[k];
      if (tv.gen.present()) r.add(tv.gen(s, t), scale);
      if (tv.discharge.present()) {
        r.add(tv.discharge(s, t), scale);
        r.add(tv.charge(s, t), -scale);
      }
    }
  };
  auto add_load = [&](lp::Index s, lp::Index t, double scale) {
    r.add(v.h2_gen(s, t), scale * lambda);
    r.add(v.h2_charge(s, t), scale * comp);
  };

  for (lp::Index s = 0; s < v.scenarios; ++s) {
    if (pol.tmr == TmrKind::Hourly) {
      for (lp::Index t = 0; t < v.hours; ++t) {
        add_supply(s, t, 1);
        if (v.tmr_slack.present()) r.add(v.tmr_slack(s, t), 1);
        add_load(s, t, -pol.alpha_tmr);
        r.emit(lp, indexed("tmr_hourly", s, t), Sense::GreaterEqual);
      }
      if (pol.excess_sales_beta) {
        for (lp::Index t = 0; t < v.hours; ++t) {
          add_supply(s, t, 1);
          add_load(s, t, -(1 + *pol.excess_sales_beta));
        }
        r.emit(lp, indexed("excess_cap", s), Sense::LessEqual);
      }
    } else {
      for (lp::Index t = 0; t < v.hours; ++t) {
        add_supply(s, t, 1);
        add_load(s, t, -1);
      }
      r.emit(lp, indexed("tmr_annual", s), Sense::Equal);
    }
  }
}

void build_objective(const SystemCase& c, const VariableIndex& v, Mode mode,
                     lp::LinearProgramd& lp) {
  if (mode == Mode::Deterministic && v.scenarios != 1)
    throw BuildError("objective", "deterministic mode needs exactly one scenario, got " +
                                      std::to_string(v.scenarios));
  double total = 0;
  for (const auto& sc : c.scenarios) total += sc.weight;
  if (std::abs(total - 1) > 1e-9)
    throw BuildError("objective", "scenario weights sum to " + std::to_string(total) + ", not 1");

  const double w = c.hour_weight();
  const auto& pen = c.policy.penalties;
  double offset = 0;
  for (std::size_t k = 0; k < c.technologies.size(); ++k) {
    const auto& spec = c.technologies[k];
    const auto& tv = v.tech[k];
    offset += spec.fom_power * spec.existing_capacity + spec.fom_energy * spec.existing_energy;
    if (tv.cap_new >= 0) lp.add_cost(tv.cap_new, spec.inv_cost_power_annualized + spec.fom_power);
    if (tv.cap_new_energy >= 0)
      lp.add_cost(tv.cap_new_energy, spec.inv_cost_energy_annualized + spec.fom_energy);
    if (tv.cap_retired >= 0) lp.add_cost(tv.cap_retired, -spec.fom_power);
    if (tv.cap_retired_energy >= 0) lp.add_cost(tv.cap_retired_energy, -spec.fom_energy);

    const double energy = marginal_energy_cost(c, spec);
    const double start = start_cost_per_mw(c, spec);
    for (lp::Index s = 0; s < v.scenarios; ++s) {
      const double sw = c.scenarios[s].weight * w;
      for (lp::Index t = 0; t < v.hours; ++t) {
        if (tv.gen.present()) lp.add_cost(tv.gen(s, t), sw * energy);
        if (tv.start.present()) lp.add_cost(tv.start(s, t), sw * start);
        if (tv.discharge.present()) lp.add_cost(tv.discharge(s, t), sw * spec.vom);
      }
    }
  }
  lp.set_objective_offset(offset);

  if (c.h2_project) {
    const auto& h = *c.h2_project;
    lp.add_cost(v.electrolyzer_cap,
                per_mw_electric(h.electrolyzer_inv_annualized + h.electrolyzer_fom, h));
    lp.add_cost(v.h2_storage_cap, h.h2_store_inv_energy_annualized);
    lp.add_cost(v.compressor_cap, per_tonne_hour(h.compressor_inv_annualized, h));
  }

  for (lp::Index s = 0; s < v.scenarios; ++s) {
    const double sw = c.scenarios[s].weight * w;
    for (lp::Index t = 0; t < v.hours; ++t) {
      lp.add_cost(v.nse_power(s, t), sw * pen.voll);
      if (c.h2_project) {
        lp.add_cost(v.nse_h2(s, t), sw * pen.unserved_h2);
        lp.add_cost(v.h2_gen(s, t), sw * c.h2_project->electrolyzer_vom);
      }
      if (v.tmr_slack.present()) lp.add_cost(v.tmr_slack(s, t), sw * pen.tmr_slack);
    }
    if (!v.rps_slack.empty()) lp.add_cost(v.rps_slack[s], sw * pen.rps_slack);
  }
}

}  // namespace h2cem::model
