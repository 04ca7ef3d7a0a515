#include "h2cem/domain.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace h2cem {

const char* to_string(TechKind k) {
  switch (k) {
    case TechKind::Thermal: return "thermal";
    case TechKind::Vre: return "vre";
    case TechKind::Battery: return "battery";
    case TechKind::Hydro: return "hydro";
    case TechKind::NuclearLike: return "nuclear-like";
  }
  return "?";
}

TechKind tech_kind_from_string(const std::string& s) {
  if (s == "thermal") return TechKind::Thermal;
  if (s == "vre") return TechKind::Vre;
  if (s == "battery") return TechKind::Battery;
  if (s == "hydro") return TechKind::Hydro;
  if (s == "nuclear-like" || s == "nuclear") return TechKind::NuclearLike;
  throw std::invalid_argument("unknown technology kind: " + s);
}

const char* to_string(TmrKind k) {
  switch (k) {
    case TmrKind::None: return "none";
    case TmrKind::Annual: return "annual";
    case TmrKind::Hourly: return "hourly";
  }
  return "?";
}

TmrKind tmr_kind_from_string(const std::string& s) {
  if (s == "none") return TmrKind::None;
  if (s == "annual") return TmrKind::Annual;
  if (s == "hourly") return TmrKind::Hourly;
  throw std::invalid_argument("unknown tmr kind: " + s);
}

const FuelSpec* SystemCase::find_fuel(const std::string& id) const {
  for (const auto& f : fuels)
    if (f.id == id) return &f;
  return nullptr;
}

const TechnologySpec* SystemCase::find_technology(const std::string& id) const {
  for (const auto& t : technologies)
    if (t.id == id) return &t;
  return nullptr;
}

namespace {

class Violations {
 public:
  void add(const std::string& path, const std::string& msg) { out_.push_back(path + ": " + msg); }
  void nonneg(const std::string& path, double v) {
    if (!(v >= 0) || !std::isfinite(v)) add(path, "must be a finite value >= 0");
  }
  void fraction(const std::string& path, double v) {
    if (!(v >= 0 && v <= 1)) add(path, "must lie in [0, 1]");
  }
  void efficiency(const std::string& path, double v) {
    if (!(v > 0 && v <= 1)) add(path, "must lie in (0, 1]");
  }
  std::vector<std::string> take() { return std::move(out_); }

 private:
  std::vector<std::string> out_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<std::string> validate_case(const SystemCase& c) {
  Violations v;
  const Index hours = c.hours();

  std::set<std::string> fuel_ids;
  for (const auto& f : c.fuels) {
    const std::string p = "fuels[" + f.id + "]";
    if (!fuel_ids.insert(f.id).second) v.add(p, "duplicate fuel id");
    v.nonneg(p + ".price", f.price);
    v.nonneg(p + ".co2_factor", f.co2_factor);
  }

  std::set<std::string> tech_ids;
  bool any_ppa = false;
  for (const auto& t : c.technologies) {
    const std::string p = "technologies[" + t.id + "]";
    if (t.id.empty()) v.add(p, "empty id");
    else if (!std::all_of(t.id.begin(), t.id.end(), [](char ch) {
               return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
             }))
      v.add(p + ".id", "ids may use letters, digits and '_' only");
    if (!tech_ids.insert(t.id).second) v.add(p, "duplicate technology id");
    v.nonneg(p + ".existing_capacity", t.existing_capacity);
    v.nonneg(p + ".existing_energy", t.existing_energy);
    v.nonneg(p + ".inv_cost_power_annualized", t.inv_cost_power_annualized);
    v.nonneg(p + ".inv_cost_energy_annualized", t.inv_cost_energy_annualized);
    v.nonneg(p + ".fom_power", t.fom_power);
    v.nonneg(p + ".fom_energy", t.fom_energy);
    v.nonneg(p + ".vom", t.vom);
    v.nonneg(p + ".start_cost", t.start_cost);
    v.nonneg(p + ".start_fuel", t.start_fuel);
    v.fraction(p + ".min_stable_fraction", t.min_stable_fraction);
    v.fraction(p + ".ramp_up", t.ramp_up);
    v.fraction(p + ".ramp_down", t.ramp_down);
    v.fraction(p + ".max_availability", t.max_availability);
    v.fraction(p + ".crm_derate", t.crm_derate);
    v.fraction(p + ".self_discharge", t.self_discharge);
    v.efficiency(p + ".charge_efficiency", t.charge_efficiency);
    v.efficiency(p + ".discharge_efficiency", t.discharge_efficiency);
    if (!(t.duration_min >= 0 && t.duration_min <= t.duration_max))
      v.add(p + ".duration_min", "must satisfy 0 <= duration_min <= duration_max");
    if (t.is_ppa_eligible && t.is_rps_eligible)
      v.add(p, "both PPA- and RPS-eligible; clean energy attributes would be double counted");
    if (t.is_ppa_eligible) any_ppa = true;
    if (t.kind == TechKind::Thermal) {
      if (!(t.heat_rate > 0)) v.add(p + ".heat_rate", "thermal resources need heat_rate > 0");
      if (!t.fuel_id) v.add(p + ".fuel_id", "thermal resources need a fuel");
      if (!(t.unit_size > 0)) v.add(p + ".unit_size", "thermal resources need unit_size > 0");
    } else {
      v.nonneg(p + ".heat_rate", t.heat_rate);
    }
    if (t.fuel_id && !c.find_fuel(*t.fuel_id)) v.add(p + ".fuel_id", "unknown fuel " + *t.fuel_id);
    if (t.has_profile()) {
      if (t.profile.empty()) v.add(p + ".profile", "vre/hydro resources need a profile group");
      for (const auto& s : c.scenarios)
        if (!t.profile.empty() && !s.cf_by_group.count(t.profile))
          v.add("scenarios[" + s.year_label + "].cf." + t.profile,
                "missing series used by technology " + t.id);
    }
  }

  if (c.h2_project) {
    const auto& h = *c.h2_project;
    const std::string p = "h2_project";
    if (!(h.electrolyzer_power_per_tonne > 0))
      v.add(p + ".electrolyzer_power_per_tonne", "must be > 0");
    v.nonneg(p + ".compressor_power_per_tonne", h.compressor_power_per_tonne);
    v.nonneg(p + ".electrolyzer_inv_annualized", h.electrolyzer_inv_annualized);
    v.nonneg(p + ".electrolyzer_fom", h.electrolyzer_fom);
    v.nonneg(p + ".electrolyzer_vom", h.electrolyzer_vom);
    v.nonneg(p + ".h2_store_inv_energy_annualized", h.h2_store_inv_energy_annualized);
    v.nonneg(p + ".compressor_inv_annualized", h.compressor_inv_annualized);
    if (h.h2_store_cap_limit) v.nonneg(p + ".h2_store_cap_limit", *h.h2_store_cap_limit);
    v.fraction(p + ".electrolyzer_min_output_fraction", h.electrolyzer_min_output_fraction);
    v.fraction(p + ".electrolyzer_ramp", h.electrolyzer_ramp);
    v.fraction(p + ".electrolyzer_availability", h.electrolyzer_availability);
    v.fraction(p + ".crm_derate", h.crm_derate);
    if (!(h.h2_lhv > 0)) v.add(p + ".h2_lhv", "must be > 0");
    v.efficiency(p + ".storage_charge_efficiency", h.storage_charge_efficiency);
    v.efficiency(p + ".storage_discharge_efficiency", h.storage_discharge_efficiency);
  }

  if (hours <= 0) v.add("demand.grid_load", "empty series");
  if (c.demand.h2_demand.size() != hours)
    v.add("demand.h2_demand", "length " + std::to_string(c.demand.h2_demand.size()) +
                                  " differs from grid_load length " + std::to_string(hours));
  if (hours > 0 && c.demand.grid_load.minCoeff() < 0) v.add("demand.grid_load", "negative load");
  if (c.demand.h2_demand.size() > 0 && c.demand.h2_demand.minCoeff() < 0)
    v.add("demand.h2_demand", "negative demand");
  if (!c.h2_project && c.demand.h2_demand.size() > 0 && c.demand.h2_demand.maxCoeff() > 0)
    v.add("demand.h2_demand", "positive H2 demand without an h2_project");

  if (c.scenarios.empty()) v.add("scenarios", "at least one weather scenario is required");
  double weight_sum = 0;
  std::set<std::string> labels;
  for (const auto& s : c.scenarios) {
    const std::string p = "scenarios[" + s.year_label + "]";
    if (!labels.insert(s.year_label).second) v.add(p, "duplicate scenario label");
    if (!(s.weight >= 0)) v.add(p + ".weight", "must be >= 0");
    weight_sum += s.weight;
    for (const auto& [group, series] : s.cf_by_group) {
      if (series.size() != hours)
        v.add(p + ".cf." + group, "length " + std::to_string(series.size()) +
                                      " differs from demand length " + std::to_string(hours));
      else if (series.size() > 0 && (series.minCoeff() < 0 || series.maxCoeff() > 1))
        v.add(p + ".cf." + group, "capacity factors must lie in [0, 1]");
    }
  }
  if (!c.scenarios.empty() && std::abs(weight_sum - 1) > 1e-9)
    v.add("scenarios", "weights sum to " + fmt(weight_sum) + ", expected 1");

  const auto& pol = c.policy;
  if (!(pol.alpha_tmr > 0 && pol.alpha_tmr <= 1)) v.add("policy.alpha_tmr", "must lie in (0, 1]");
  if (pol.excess_sales_beta) {
    if (!(*pol.excess_sales_beta >= 0)) v.add("policy.excess_sales_beta", "must be >= 0");
    if (pol.tmr != TmrKind::Hourly)
      v.add("policy.excess_sales_beta", "only applies with hourly time matching");
  }
  if (pol.rps_kappa && !(*pol.rps_kappa >= 0 && *pol.rps_kappa < 1))
    v.add("policy.rps_kappa", "must lie in [0, 1), got " + fmt(*pol.rps_kappa));
  if (pol.rps_covers_h2 && !pol.rps_kappa) v.add("policy.rps_covers_h2", "requires rps_kappa");
  v.nonneg("policy.crm_alpha", pol.crm_alpha);
  v.nonneg("policy.penalties.voll", pol.penalties.voll);
  v.nonneg("policy.penalties.unserved_h2", pol.penalties.unserved_h2);
  v.nonneg("policy.penalties.rps_slack", pol.penalties.rps_slack);
  v.nonneg("policy.penalties.tmr_slack", pol.penalties.tmr_slack);
  if (pol.tmr != TmrKind::None) {
    if (!c.h2_project) v.add("policy.tmr", "time matching requires an h2_project");
    if (!any_ppa) v.add("policy.tmr", "time matching requires at least one PPA-eligible resource");
  }
  if (pol.rps_kappa && *pol.rps_kappa > 0 && !(pol.penalties.rps_slack > 0)) {
    bool any_rps = false;
    for (const auto& t : c.technologies) any_rps = any_rps || t.is_rps_eligible;
    if (!any_rps) v.add("policy.rps_kappa", "no RPS-eligible resource and no slack penalty");
  }
  return v.take();
}

}  // namespace h2cem
