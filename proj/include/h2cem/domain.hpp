#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace h2cem {

using Series = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr int kHoursPerYear = 8760;

enum class TechKind { Thermal, Vre, Battery, Hydro, NuclearLike };

const char* to_string(TechKind k);
TechKind tech_kind_from_string(const std::string& s);

/// Cost and operating parameters of one generation or storage asset class.
/// Power quantities are MW, energy MWh, costs annualized $ per unit-year.
struct TechnologySpec {
  std::string id;
  TechKind kind = TechKind::Thermal;
  std::string profile;  ///< capacity-factor group for vre and hydro

  double existing_capacity = 0;
  double existing_energy = 0;  ///< battery only
  bool expandable = false;
  bool retirable = false;

  double inv_cost_power_annualized = 0;
  double inv_cost_energy_annualized = 0;
  double fom_power = 0;
  double fom_energy = 0;
  double vom = 0;

  double heat_rate = 0;
  std::optional<std::string> fuel_id;
  double min_stable_fraction = 0;
  double ramp_up = 1;
  double ramp_down = 1;
  double start_cost = 0;
  double start_fuel = 0;
  double unit_size = 0;

  double max_availability = 1;
  double crm_derate = 0;

  double duration_min = 0.15;
  double duration_max = 12;
  double self_discharge = 0;
  double charge_efficiency = 1;
  double discharge_efficiency = 1;

  bool is_ppa_eligible = false;
  bool is_rps_eligible = false;

  bool is_storage() const { return kind == TechKind::Battery; }
  bool has_profile() const { return kind == TechKind::Vre || kind == TechKind::Hydro; }
};

struct FuelSpec {
  std::string id;
  double price = 0;       ///< $/MMBtu
  double co2_factor = 0;  ///< tCO2/MMBtu
};

/// Electrolyzer, compressor and tank. Investment and FOM prices for the
/// electrolyzer and compressor are per MW of H2 (LHV basis); the model
/// converts them with `h2_lhv`.
struct H2ProjectSpec {
  double electrolyzer_power_per_tonne = 54.3;  ///< MWh_e per tH2
  double compressor_power_per_tonne = 0.71;    ///< MWh_e per tH2 charged
  double electrolyzer_inv_annualized = 142586;
  double electrolyzer_fom = 28604;
  double electrolyzer_vom = 0;  ///< $/tH2
  double h2_store_inv_energy_annualized = 33929;  ///< $/tH2/yr
  double compressor_inv_annualized = 220490;
  std::optional<double> h2_store_cap_limit;  ///< tonnes
  double electrolyzer_min_output_fraction = 0;
  double electrolyzer_ramp = 1;
  double electrolyzer_availability = 1;
  double h2_lhv = 33.33;  ///< MWh per tH2
  double crm_derate = 1;
  double storage_charge_efficiency = 1;
  double storage_discharge_efficiency = 1;
};

struct WeatherScenario {
  std::string year_label;
  std::map<std::string, Series> cf_by_group;
  double weight = 1;
};

struct DemandProfile {
  Series grid_load;  ///< MW
  Series h2_demand;  ///< tH2/h
};

enum class TmrKind { None, Annual, Hourly };

const char* to_string(TmrKind k);
TmrKind tmr_kind_from_string(const std::string& s);

struct Penalties {
  double voll = 9000;         ///< $/MWh
  double unserved_h2 = 5e7;   ///< $/tH2
  double rps_slack = 1000;    ///< $/MWh
  double tmr_slack = 500;     ///< $/MWh
};

struct PolicyConfig {
  TmrKind tmr = TmrKind::None;
  double alpha_tmr = 1;
  std::optional<double> excess_sales_beta;  ///< hourly TMR only; unset means no cap
  std::optional<double> rps_kappa;
  bool rps_covers_h2 = false;
  double crm_alpha = 0.1375;
  bool tmr_includes_compressor = false;
  Penalties penalties;
};

struct SystemCase {
  std::string label;
  std::vector<TechnologySpec> technologies;
  std::vector<FuelSpec> fuels;
  std::optional<H2ProjectSpec> h2_project;
  DemandProfile demand;
  std::vector<WeatherScenario> scenarios;
  PolicyConfig policy;

  Index hours() const { return demand.grid_load.size(); }
  /// Annual weight of one modeled hour, so a horizon shorter than a year
  /// still pairs annualized capital costs with a full year of operation.
  double hour_weight() const { return hours() > 0 ? double(kHoursPerYear) / double(hours()) : 1.0; }
  const FuelSpec* find_fuel(const std::string& id) const;
  const TechnologySpec* find_technology(const std::string& id) const;
};

/// Capital recovery: capex * r / (1 - (1+r)^-L), or capex / L at r = 0.
template <typename Scalar>
Scalar annuitize(Scalar capex, Scalar lifetime, Scalar rate) {
  using std::isfinite;
  if (!isfinite(capex) || !isfinite(lifetime) || !isfinite(rate))
    throw std::invalid_argument("annuitize: non-finite input");
  if (lifetime < Scalar(1)) throw std::invalid_argument("annuitize: lifetime must be >= 1");
  if (rate < Scalar(0)) throw std::invalid_argument("annuitize: rate must be >= 0");
  if (rate == Scalar(0)) return capex / lifetime;
  using std::pow;
  return capex * rate / (Scalar(1) - pow(Scalar(1) + rate, -lifetime));
}

/// Tank limit in tonnes for a cap expressed in hours of rated H2 demand.
inline double storage_limit_from_hours(double hours, double rated_tph) { return hours * rated_tph; }

/// Electrolyzer electricity draw (MW) for a production rate in tH2/h.
inline double electrolyzer_draw(double h2_tph, const H2ProjectSpec& h2) {
  return h2_tph * h2.electrolyzer_power_per_tonne;
}

/// Every invariant violation, each prefixed with the offending field path.
/// Empty iff the case is well formed.
std::vector<std::string> validate_case(const SystemCase& c);

}  // namespace h2cem
