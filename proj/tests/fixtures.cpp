#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fixtures {

using namespace h2cem;

Series constant(Index hours, double value) { return Series::Constant(hours, value); }

Series wind_profile(Index hours, std::uint64_t seed, double mean) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.08);
  const double two_pi = 2 * std::numbers::pi;
  Series cf(hours);
  for (Index t = 0; t < hours; ++t) {
    const double v = mean + 0.18 * std::sin(two_pi * double(t) / 24.0 + 1.3) +
                     0.22 * std::sin(two_pi * double(t) / 61.0) + noise(rng);
    cf[t] = std::clamp(v, 0.02, 0.95);
  }
  return cf;
}

FuelSpec natural_gas() { return {"natural_gas", 2.03, 0.05306}; }

TechnologySpec ngcc(const std::string& id) {
  TechnologySpec t;
  t.id = id;
  t.kind = TechKind::Thermal;
  t.expandable = true;
  t.inv_cost_power_annualized = annuitize(1080449.0, 30.0, 0.04);
  t.fom_power = 13513;
  t.vom = 2;
  t.heat_rate = 6.36;
  t.fuel_id = "natural_gas";
  t.min_stable_fraction = 0.3;
  t.start_cost = 64703;
  t.start_fuel = 1454;
  t.unit_size = 500;
  t.max_availability = 0.9;
  t.crm_derate = 0.93;
  return t;
}

TechnologySpec ngct(const std::string& id) {
  TechnologySpec t = ngcc(id);
  t.inv_cost_power_annualized = annuitize(950249.0, 30.0, 0.04);
  t.fom_power = 11849;
  t.vom = 5;
  t.heat_rate = 9.71;
  t.min_stable_fraction = 0;
  t.start_cost = 27028;
  t.start_fuel = 815.5;
  t.unit_size = 100;
  return t;
}

TechnologySpec wind(const std::string& id, bool ppa) {
  TechnologySpec t;
  t.id = id;
  t.kind = TechKind::Vre;
  t.profile = "wind";
  t.expandable = true;
  t.inv_cost_power_annualized = 57807;
  t.fom_power = 44100;
  t.crm_derate = 0.8;
  t.is_ppa_eligible = ppa;
  t.is_rps_eligible = !ppa;
  return t;
}

TechnologySpec battery(const std::string& id, bool ppa) {
  TechnologySpec t;
  t.id = id;
  t.kind = TechKind::Battery;
  t.expandable = true;
  t.inv_cost_power_annualized = 16064;
  t.inv_cost_energy_annualized = 18642;
  t.fom_power = 6379;
  t.fom_energy = 7403;
  t.vom = 1;
  t.self_discharge = 2e-5;
  t.charge_efficiency = 0.92;
  t.discharge_efficiency = 0.92;
  t.crm_derate = 0.8;
  t.is_ppa_eligible = ppa;
  return t;
}

WeatherScenario scenario(const std::string& label, Series wind_cf, double weight) {
  WeatherScenario s;
  s.year_label = label;
  s.cf_by_group["wind"] = std::move(wind_cf);
  s.weight = weight;
  return s;
}

SystemCase thermal_only(Index hours, double load, double capacity) {
  SystemCase c;
  c.label = "thermal_only";
  c.fuels.push_back(natural_gas());
  TechnologySpec g = ngct("gas");
  g.expandable = false;
  g.existing_capacity = capacity;
  g.max_availability = 1;
  c.technologies.push_back(g);
  c.demand.grid_load = constant(hours, load);
  c.demand.h2_demand = constant(hours, 0);
  WeatherScenario s;
  s.year_label = "y0";
  c.scenarios.push_back(s);
  return c;
}

SystemCase desk_case(TmrKind tmr, double alpha, Index hours) {
  SystemCase c;
  c.label = "desk";
  c.fuels.push_back(natural_gas());
  c.technologies.push_back(ngcc("ngcc"));
  c.technologies.push_back(wind("wind", false));
  c.technologies.push_back(wind("ppa_wind", true));
  c.h2_project = H2ProjectSpec{};
  Series load(hours);
  const double two_pi = 2 * std::numbers::pi;
  for (Index t = 0; t < hours; ++t)
    load[t] = 2000 + 350 * std::sin(two_pi * double(t) / 24.0 - 2.0);
  c.demand.grid_load = load;
  c.demand.h2_demand = constant(hours, 18.4);
  c.scenarios.push_back(scenario("w0", wind_profile(hours, 7)));
  c.policy.tmr = tmr;
  c.policy.alpha_tmr = alpha;
  if (tmr == TmrKind::Hourly) c.policy.excess_sales_beta = 0.2;
  return c;
}

}  // namespace fixtures
