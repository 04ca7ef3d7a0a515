#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "h2cem/model/assemble.hpp"

// Post-processing of solved cases. Annual quantities are probability-weighted
// over scenarios and scaled by the hour weight; capacities are first-stage
// and unweighted. Prices are duals divided by (probability x hour weight).
namespace h2cem::analysis {

using model::SolvedCase;

/// tCO2 per MWh of output for a thermal resource.
double emission_rate(const TechnologySpec& t, const FuelSpec& f);

double emissions_total(const SolvedCase& sc);
std::map<std::string, double> emissions_by_technology(const SolvedCase& sc);

/// (with - without) / h2_tonnes; throws when h2_tonnes <= 0.
double consequential_emissions(double emissions_with, double emissions_without, double h2_tonnes);

/// Annual electrolyzer output in tonnes.
double h2_production(const SolvedCase& sc);

struct LcohBreakdown {
  double electrolyzer = 0;   ///< investment, FOM and VOM
  double storage = 0;
  double compressor = 0;
  double energy_purchases = 0;
  double capacity_purchases = 0;
  double ppa_costs = 0;
  double ppa_sales = 0;
  double total = 0;          ///< $ per year
  double kg = 0;
  double lcoh = 0;           ///< $/kg
};

/// Break-even H2 price; throws when the case produces no H2.
LcohBreakdown lcoh(const SolvedCase& sc);

/// Certificate cost per kg: share x consumption [MWh/t] x price [$/MWh] / 1000.
double eac_cost(double consumption_per_tonne, double certificate_share, double price);

struct Robustness {
  Index unmet_hours = 0;
  double unmatched_share = 0;
};

Robustness robustness_metrics(const Series& slack, const Series& electrolyzer_load,
                              double tol = 1e-7);
/// Per scenario of an out-of-sample solve.
std::vector<Robustness> robustness_metrics(const SolvedCase& sc, double tol = 1e-7);

struct RevenueStack {
  std::string id;
  bool ppa = false;
  double installed_mw = 0;
  double electricity_sales = 0;  ///< $ per year
  double rps = 0;
  double tmr = 0;
  double capacity_reserve = 0;
  double excess_cap = 0;  ///< charge from the excess-sales cap (<= 0), not a revenue source
  double net_revenue = 0;
  double total_cost = 0;

  double per_mw(double v) const { return installed_mw > 0 ? v / installed_mw : 0.0; }
  /// Revenue above cost; for PPA resources this equals the excess-sales charge.
  double rent() const { return net_revenue - total_cost; }
};

/// One entry per non-storage or storage resource with installed capacity above `tol`.
std::vector<RevenueStack> revenue_stack(const SolvedCase& sc, double tol = 1e-6);

struct Histogram {
  double bin_width = 10;
  double cap = 250;
  std::vector<double> counts;  ///< last bin collects values >= cap
  std::vector<std::string> labels() const;
};

Histogram price_histogram(const Series& prices, const Series& weights, double bin_width = 10,
                          double cap = 250);
Histogram price_histogram(const Series& prices, double bin_width = 10, double cap = 250);

/// Dual of a family converted to $/unit prices, one column per scenario.
Eigen::MatrixXd hourly_prices(const SolvedCase& sc, const std::string& family);

struct PriceReport {
  double energy_average = 0;    ///< demand-weighted, $/MWh
  double capacity_average = 0;  ///< mean hourly, $/MW-h
  double capacity_annual = 0;   ///< sum over the year, $/MW-yr
  std::optional<double> rps;
  std::optional<double> tmr;    ///< annual price, or mean hourly price under hourly matching
  std::optional<Histogram> tmr_histogram;
};

PriceReport price_report(const SolvedCase& sc);

/// Curtailed share of available energy per VRE technology, in [0, 1].
std::map<std::string, double> curtailment_fraction(const SolvedCase& sc);

struct CapacityRecord {
  double existing = 0;
  double retired = 0;
  double added = 0;
  double installed = 0;
  double existing_energy = 0;
  double retired_energy = 0;
  double added_energy = 0;
  double installed_energy = 0;
};

struct CaseReport {
  std::string label;
  std::string mode;
  std::vector<std::string> scenarios;
  std::string status;
  double objective = 0;
  std::map<std::string, CapacityRecord> capacities;
  double electrolyzer_mw = 0;
  double h2_storage_tonnes = 0;
  double compressor_tph = 0;
  std::map<std::string, double> generation;  ///< MWh per year
  double emissions = 0;
  double h2_tonnes = 0;
  std::optional<LcohBreakdown> lcoh;
  std::optional<double> consequential_emissions;
  std::optional<std::string> baseline_label;
  std::map<std::string, double> curtailment;
  PriceReport prices;
  std::vector<RevenueStack> revenues;
  std::vector<Robustness> robustness;  ///< out-of-sample runs only
  double unserved_energy = 0;          ///< MWh per year
  double unserved_h2 = 0;              ///< tonnes per year
};

CaseReport build_report(const SolvedCase& sc, const std::string& label);

/// Pretty JSON with sorted keys; `hash` and `seed` are recorded for provenance.
std::string report_to_json(const CaseReport& r, const std::string& hash, std::uint64_t seed);
CaseReport report_from_json(const std::string& text);

}  // namespace h2cem::analysis
