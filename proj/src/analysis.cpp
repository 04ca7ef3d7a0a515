#include "h2cem/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "h2cem/lp/dual_series.hpp"

namespace h2cem::analysis {

using model::indexed;

namespace {

double weight(const SolvedCase& sc, Index s) {
  return sc.system.scenarios[s].weight * sc.system.hour_weight();
}

// Dual grid of a family, or nullopt when the model has no such rows.
std::optional<lp::DualSeries> duals(const SolvedCase& sc, const std::string& family) {
  try {
    return lp::dual_series(sc.solution, family);
  } catch (const lp::UnknownFamilyError&) {
    return std::nullopt;
  }
}

double dual_at(const std::optional<lp::DualSeries>& d, Index s, Index t = 0) {
  if (!d) return 0;
  return d->at(s, t).value_or(0.0);
}

double installed(const SolvedCase& sc, std::size_t k) {
  const auto& spec = sc.system.technologies[k];
  const auto& tv = sc.vars.tech[k];
  return spec.existing_capacity - sc.value(tv.cap_retired) + sc.value(tv.cap_new);
}

double installed_energy(const SolvedCase& sc, std::size_t k) {
  const auto& spec = sc.system.technologies[k];
  const auto& tv = sc.vars.tech[k];
  return spec.existing_energy - sc.value(tv.cap_retired_energy) + sc.value(tv.cap_new_energy);
}

// Net injection of technology k in (s, t).
double injection(const SolvedCase& sc, std::size_t k, Index s, Index t) {
  const auto& tv = sc.vars.tech[k];
  if (tv.gen.present()) return sc.value(tv.gen(s, t));
  return sc.value(tv.discharge(s, t)) - sc.value(tv.charge(s, t));
}

// Annual fuel, VOM and start costs of technology k.
double operating_cost(const SolvedCase& sc, std::size_t k) {
  const auto& spec = sc.system.technologies[k];
  const auto& tv = sc.vars.tech[k];
  const double energy = model::marginal_energy_cost(sc.system, spec);
  const double start = model::start_cost_per_mw(sc.system, spec);
  double total = 0;
  for (Index s = 0; s < sc.vars.scenarios; ++s) {
    double acc = 0;
    for (Index t = 0; t < sc.vars.hours; ++t) {
      if (tv.gen.present()) acc += energy * sc.value(tv.gen(s, t));
      if (tv.start.present()) acc += start * sc.value(tv.start(s, t));
      if (tv.discharge.present()) acc += spec.vom * sc.value(tv.discharge(s, t));
    }
    total += weight(sc, s) * acc;
  }
  return total;
}

double fixed_cost(const SolvedCase& sc, std::size_t k) {
  const auto& spec = sc.system.technologies[k];
  const auto& tv = sc.vars.tech[k];
  return spec.inv_cost_power_annualized * sc.value(tv.cap_new) +
         spec.inv_cost_energy_annualized * sc.value(tv.cap_new_energy) +
         spec.fom_power * installed(sc, k) + spec.fom_energy * installed_energy(sc, k);
}

double electrolyzer_load(const SolvedCase& sc, Index s, Index t, bool with_compressor) {
  const auto& h = *sc.system.h2_project;
  double load = h.electrolyzer_power_per_tonne * sc.value(sc.vars.h2_gen(s, t));
  if (with_compressor) load += h.compressor_power_per_tonne * sc.value(sc.vars.h2_charge(s, t));
  return load;
}

}  // namespace

double emission_rate(const TechnologySpec& t, const FuelSpec& f) { return t.heat_rate * f.co2_factor; }

std::map<std::string, double> emissions_by_technology(const SolvedCase& sc) {
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    const auto& spec = sc.system.technologies[k];
    if (!spec.fuel_id) continue;
    const FuelSpec* f = sc.system.find_fuel(*spec.fuel_id);
    if (!f || f->co2_factor == 0) continue;
    const auto& tv = sc.vars.tech[k];
    const double per_mwh = emission_rate(spec, *f);
    const double per_mw_start =
        spec.unit_size > 0 ? spec.start_fuel / spec.unit_size * f->co2_factor : 0.0;
    double total = 0;
    for (Index s = 0; s < sc.vars.scenarios; ++s) {
      double acc = 0;
      for (Index t = 0; t < sc.vars.hours; ++t) {
        if (tv.gen.present()) acc += per_mwh * sc.value(tv.gen(s, t));
        if (tv.start.present()) acc += per_mw_start * sc.value(tv.start(s, t));
      }
      total += weight(sc, s) * acc;
    }
    out[spec.id] = total;
  }
  return out;
}

double emissions_total(const SolvedCase& sc) {
  double total = 0;
  for (const auto& [_, e] : emissions_by_technology(sc)) total += e;
  return total;
}

double consequential_emissions(double emissions_with, double emissions_without, double h2_tonnes) {
  if (!(h2_tonnes > 0)) throw std::invalid_argument("consequential_emissions: h2_tonnes must be > 0");
  return (emissions_with - emissions_without) / h2_tonnes;
}

double h2_production(const SolvedCase& sc) {
  if (!sc.system.h2_project) return 0;
  double total = 0;
  for (Index s = 0; s < sc.vars.scenarios; ++s)
    total += weight(sc, s) * sc.solution.primal.segment(sc.vars.h2_gen(s, 0), sc.vars.hours).sum();
  return total;
}

LcohBreakdown lcoh(const SolvedCase& sc) {
  if (!sc.system.h2_project) throw std::invalid_argument("lcoh: case has no h2 project");
  const auto& h = *sc.system.h2_project;
  LcohBreakdown b;
  const double tonnes = h2_production(sc);
  if (!(tonnes > 0)) throw std::invalid_argument("lcoh: zero H2 production");
  b.kg = tonnes * 1000;

  b.electrolyzer = model::per_mw_electric(h.electrolyzer_inv_annualized + h.electrolyzer_fom, h) *
                       sc.value(sc.vars.electrolyzer_cap) +
                   h.electrolyzer_vom * tonnes;
  b.storage = h.h2_store_inv_energy_annualized * sc.value(sc.vars.h2_storage_cap);
  b.compressor = model::per_tonne_hour(h.compressor_inv_annualized, h) * sc.value(sc.vars.compressor_cap);

  const auto energy = duals(sc, "power_balance");
  const auto crm = duals(sc, "crm");
  for (Index s = 0; s < sc.vars.scenarios; ++s) {
    for (Index t = 0; t < sc.vars.hours; ++t) {
      b.energy_purchases += dual_at(energy, s, t) * electrolyzer_load(sc, s, t, true);
      b.capacity_purchases += dual_at(crm, s, t) * h.crm_derate * electrolyzer_load(sc, s, t, false);
    }
  }
  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    if (!sc.system.technologies[k].is_ppa_eligible) continue;
    b.ppa_costs += fixed_cost(sc, k) + operating_cost(sc, k);
    for (Index s = 0; s < sc.vars.scenarios; ++s)
      for (Index t = 0; t < sc.vars.hours; ++t)
        b.ppa_sales += dual_at(energy, s, t) * injection(sc, k, s, t);
  }
  b.total = b.electrolyzer + b.storage + b.compressor + b.energy_purchases + b.capacity_purchases +
            b.ppa_costs - b.ppa_sales;
  b.lcoh = b.total / b.kg;
  return b;
}

double eac_cost(double consumption_per_tonne, double certificate_share, double price) {
  return certificate_share * consumption_per_tonne * price / 1000.0;
}

Robustness robustness_metrics(const Series& slack, const Series& electrolyzer_load, double tol) {
  if (slack.size() != electrolyzer_load.size())
    throw std::invalid_argument("robustness_metrics: series lengths differ");
  Robustness r;
  double unmatched = 0, load = 0;
  for (Index t = 0; t < slack.size(); ++t) {
    if (slack[t] > tol) {
      ++r.unmet_hours;
      unmatched += slack[t];
      load += electrolyzer_load[t];
    }
  }
  r.unmatched_share = (r.unmet_hours > 0 && load > 0) ? unmatched / load : 0.0;
  return r;
}

std::vector<Robustness> robustness_metrics(const SolvedCase& sc, double tol) {
  std::vector<Robustness> out;
  if (!sc.vars.tmr_slack.present() || !sc.system.h2_project) return out;
  const bool comp = sc.system.policy.tmr_includes_compressor;
  for (Index s = 0; s < sc.vars.scenarios; ++s) {
    Series slack(sc.vars.hours), load(sc.vars.hours);
    for (Index t = 0; t < sc.vars.hours; ++t) {
      slack[t] = sc.value(sc.vars.tmr_slack(s, t));
      load[t] = electrolyzer_load(sc, s, t, comp);
    }
    out.push_back(robustness_metrics(slack, load, tol));
  }
  return out;
}

std::vector<RevenueStack> revenue_stack(const SolvedCase& sc, double tol) {
  const auto energy = duals(sc, "power_balance");
  const auto crm = duals(sc, "crm");
  const auto rps = duals(sc, "rps");
  const auto tmr_hourly = duals(sc, "tmr_hourly");
  const auto tmr_annual = duals(sc, "tmr_annual");
  const auto excess = duals(sc, "excess_cap");
  std::vector<RevenueStack> out;
  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    const auto& spec = sc.system.technologies[k];
    const auto& tv = sc.vars.tech[k];
    RevenueStack r;
    r.id = spec.id;
    r.ppa = spec.is_ppa_eligible;
    r.installed_mw = installed(sc, k);
    if (!(r.installed_mw > tol)) continue;
    for (Index s = 0; s < sc.vars.scenarios; ++s) {
      const Series* cf = nullptr;
      if (spec.has_profile()) cf = &sc.system.scenarios[s].cf_by_group.at(spec.profile);
      double annual_injection = 0;
      for (Index t = 0; t < sc.vars.hours; ++t) {
        const double q = injection(sc, k, s, t);
        annual_injection += q;
        r.electricity_sales += dual_at(energy, s, t) * q;
        if (r.ppa) {
          r.tmr += dual_at(tmr_hourly, s, t) * q;
        } else if (spec.crm_derate > 0) {
          const double firm = spec.is_storage() ? q : r.installed_mw * (cf ? (*cf)[t] : 1.0);
          r.capacity_reserve += dual_at(crm, s, t) * spec.crm_derate * firm;
        }
      }
      if (r.ppa) {
        r.tmr += dual_at(tmr_annual, s) * annual_injection;
        r.excess_cap += dual_at(excess, s) * annual_injection;
      } else if (spec.is_rps_eligible && !spec.is_storage() && tv.gen.present()) {
        r.rps += dual_at(rps, s) * annual_injection;
      }
    }
    r.net_revenue = r.electricity_sales + r.rps + r.tmr + r.capacity_reserve;
    r.total_cost = fixed_cost(sc, k) + operating_cost(sc, k);
    out.push_back(r);
  }
  return out;
}

std::vector<std::string> Histogram::labels() const {
  std::vector<std::string> out;
  const std::size_t regular = counts.empty() ? 0 : counts.size() - 1;
  for (std::size_t i = 0; i < regular; ++i) {
    const auto lo = static_cast<long long>(std::llround(i * bin_width));
    const auto hi = static_cast<long long>(std::llround((i + 1) * bin_width));
    out.push_back(std::to_string(lo) + "-" + std::to_string(hi));
  }
  out.push_back(std::to_string(static_cast<long long>(std::llround(cap))) + "+");
  return out;
}

Histogram price_histogram(const Series& prices, const Series& weights, double bin_width, double cap) {
  if (!(bin_width > 0) || !(cap > 0)) throw std::invalid_argument("price_histogram: bad bins");
  Histogram h;
  h.bin_width = bin_width;
  h.cap = cap;
  const auto regular = static_cast<std::size_t>(std::ceil(cap / bin_width - 1e-9));
  h.counts.assign(regular + 1, 0.0);
  for (Index t = 0; t < prices.size(); ++t) {
    const double p = prices[t];
    std::size_t bin;
    if (p >= cap) bin = regular;
    else if (p < bin_width) bin = 0;  // negative prices join the first bin
    else bin = std::min(regular - 1, static_cast<std::size_t>(p / bin_width));
    h.counts[bin] += weights[t];
  }
  return h;
}

Histogram price_histogram(const Series& prices, double bin_width, double cap) {
  return price_histogram(prices, Series::Ones(prices.size()), bin_width, cap);
}

Eigen::MatrixXd hourly_prices(const SolvedCase& sc, const std::string& family) {
  const auto d = lp::dual_series(sc.solution, family);
  Eigen::MatrixXd out(d.hours, d.scenarios);
  for (Index s = 0; s < d.scenarios; ++s) {
    const double w = weight(sc, s);
    for (Index t = 0; t < d.hours; ++t) out(t, s) = w > 0 ? d.at(s, t).value_or(0.0) / w : 0.0;
  }
  return out;
}

PriceReport price_report(const SolvedCase& sc) {
  PriceReport r;
  const Index S = sc.vars.scenarios, T = sc.vars.hours;
  const Eigen::MatrixXd energy = hourly_prices(sc, "power_balance");
  double num = 0, den = 0;
  for (Index s = 0; s < S; ++s) {
    const double p = sc.system.scenarios[s].weight;
    num += p * energy.col(s).dot(sc.system.demand.grid_load);
    den += p * sc.system.demand.grid_load.sum();
  }
  r.energy_average = den > 0 ? num / den : energy.mean();

  const Eigen::MatrixXd cap = hourly_prices(sc, "crm");
  for (Index s = 0; s < S; ++s) {
    const double p = sc.system.scenarios[s].weight;
    r.capacity_average += p * cap.col(s).mean();
    r.capacity_annual += p * cap.col(s).sum() * sc.system.hour_weight();
  }

  if (auto d = duals(sc, "rps")) {
    double v = 0;
    for (Index s = 0; s < S; ++s) v += dual_at(d, s) / sc.system.hour_weight();
    r.rps = v;
  }
  if (auto d = duals(sc, "tmr_annual")) {
    double v = 0;
    for (Index s = 0; s < S; ++s) v += dual_at(d, s) / sc.system.hour_weight();
    r.tmr = v;
  }
  if (duals(sc, "tmr_hourly")) {
    const Eigen::MatrixXd tmr = hourly_prices(sc, "tmr_hourly");
    Series all(S * T), w(S * T);
    double mean = 0;
    for (Index s = 0; s < S; ++s) {
      const double p = sc.system.scenarios[s].weight;
      all.segment(s * T, T) = tmr.col(s);
      w.segment(s * T, T).setConstant(p);
      mean += p * tmr.col(s).mean();
    }
    r.tmr = mean;
    r.tmr_histogram = price_histogram(all, w);
  }
  return r;
}

std::map<std::string, double> curtailment_fraction(const SolvedCase& sc) {
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    const auto& spec = sc.system.technologies[k];
    if (spec.kind != TechKind::Vre) continue;
    const auto& tv = sc.vars.tech[k];
    const double cap = installed(sc, k);
    double available = 0, curtailed = 0;
    for (Index s = 0; s < sc.vars.scenarios; ++s) {
      const Series& cf = sc.system.scenarios[s].cf_by_group.at(spec.profile);
      const double w = sc.system.scenarios[s].weight;
      for (Index t = 0; t < sc.vars.hours; ++t) {
        const double a = cf[t] * cap;
        available += w * a;
        curtailed += w * std::max(0.0, a - sc.value(tv.gen(s, t)));
      }
    }
    out[spec.id] = available > 0 ? std::clamp(curtailed / available, 0.0, 1.0) : 0.0;
  }
  return out;
}

CaseReport build_report(const SolvedCase& sc, const std::string& label) {
  CaseReport r;
  r.label = label;
  r.mode = model::to_string(sc.mode);
  for (const auto& s : sc.system.scenarios) r.scenarios.push_back(s.year_label);
  r.status = lp::to_string(sc.solution.status);
  r.objective = sc.solution.objective;
  if (!sc.solution.optimal()) return r;

  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    const auto& spec = sc.system.technologies[k];
    const auto& tv = sc.vars.tech[k];
    CapacityRecord c;
    c.existing = spec.existing_capacity;
    c.retired = sc.value(tv.cap_retired);
    c.added = sc.value(tv.cap_new);
    c.installed = installed(sc, k);
    if (spec.is_storage()) {
      c.existing_energy = spec.existing_energy;
      c.retired_energy = sc.value(tv.cap_retired_energy);
      c.added_energy = sc.value(tv.cap_new_energy);
      c.installed_energy = installed_energy(sc, k);
    }
    r.capacities[spec.id] = c;
    double gen = 0;
    for (Index s = 0; s < sc.vars.scenarios; ++s) {
      double acc = 0;
      for (Index t = 0; t < sc.vars.hours; ++t)
        acc += tv.gen.present() ? sc.value(tv.gen(s, t)) : sc.value(tv.discharge(s, t));
      gen += weight(sc, s) * acc;
    }
    r.generation[spec.id] = gen;
  }
  r.electrolyzer_mw = sc.value(sc.vars.electrolyzer_cap);
  r.h2_storage_tonnes = sc.value(sc.vars.h2_storage_cap);
  r.compressor_tph = sc.value(sc.vars.compressor_cap);
  r.emissions = emissions_total(sc);
  r.h2_tonnes = h2_production(sc);
  if (sc.system.h2_project && r.h2_tonnes > 0) r.lcoh = lcoh(sc);
  r.curtailment = curtailment_fraction(sc);
  r.prices = price_report(sc);
  r.revenues = revenue_stack(sc);
  r.robustness = robustness_metrics(sc);
  for (Index s = 0; s < sc.vars.scenarios; ++s) {
    r.unserved_energy +=
        weight(sc, s) * sc.solution.primal.segment(sc.vars.nse_power(s, 0), sc.vars.hours).sum();
    if (sc.vars.nse_h2.present())
      r.unserved_h2 +=
          weight(sc, s) * sc.solution.primal.segment(sc.vars.nse_h2(s, 0), sc.vars.hours).sum();
  }
  return r;
}

}  // namespace h2cem::analysis

namespace h2cem::analysis {

using nlohmann::json;

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json(const LcohBreakdown& b) {
  return {{"electrolyzer", b.electrolyzer}, {"storage", b.storage}, {"compressor", b.compressor},
          {"energy_purchases", b.energy_purchases}, {"capacity_purchases", b.capacity_purchases},
          {"ppa_costs", b.ppa_costs}, {"ppa_sales", b.ppa_sales}, {"total", b.total},
          {"kg", b.kg}, {"lcoh", b.lcoh}};
}

LcohBreakdown lcoh_from(const json& j) {
  LcohBreakdown b;
  b.electrolyzer = j.at("electrolyzer");
  b.storage = j.at("storage");
  b.compressor = j.at("compressor");
  b.energy_purchases = j.at("energy_purchases");
  b.capacity_purchases = j.at("capacity_purchases");
  b.ppa_costs = j.at("ppa_costs");
  b.ppa_sales = j.at("ppa_sales");
  b.total = j.at("total");
  b.kg = j.at("kg");
  b.lcoh = j.at("lcoh");
  return b;
}

}  // namespace

std::string report_to_json(const CaseReport& r, const std::string& hash, std::uint64_t seed) {
  json j;
  j["label"] = r.label;
  j["mode"] = r.mode;
  j["scenarios"] = r.scenarios;
  j["status"] = r.status;
  j["objective"] = r.objective;
  j["config_hash"] = hash;
  j["seed"] = seed;
  json caps = json::object();
  for (const auto& [id, c] : r.capacities)
    caps[id] = {{"existing", c.existing}, {"retired", c.retired}, {"added", c.added},
                {"installed", c.installed}, {"existing_energy", c.existing_energy},
                {"retired_energy", c.retired_energy}, {"added_energy", c.added_energy},
                {"installed_energy", c.installed_energy}};
  j["capacities"] = caps;
  j["h2_assets"] = {{"electrolyzer_mw", r.electrolyzer_mw},
                    {"h2_storage_tonnes", r.h2_storage_tonnes},
                    {"compressor_tph", r.compressor_tph}};
  j["generation_mwh"] = r.generation;
  j["emissions_tco2"] = r.emissions;
  j["h2_tonnes"] = r.h2_tonnes;
  j["lcoh"] = r.lcoh ? to_json(*r.lcoh) : json(nullptr);
  j["consequential_emissions"] = opt(r.consequential_emissions);
  j["baseline_label"] = opt(r.baseline_label);
  j["curtailment"] = r.curtailment;
  json prices = {{"energy_average", r.prices.energy_average},
                 {"capacity_average", r.prices.capacity_average},
                 {"capacity_annual", r.prices.capacity_annual},
                 {"rps", opt(r.prices.rps)},
                 {"tmr", opt(r.prices.tmr)}};
  if (r.prices.tmr_histogram) {
    const auto& h = *r.prices.tmr_histogram;
    prices["tmr_histogram"] = {{"bin_width", h.bin_width}, {"cap", h.cap}, {"counts", h.counts}};
  } else {
    prices["tmr_histogram"] = nullptr;
  }
  j["prices"] = prices;
  json rev = json::array();
  for (const auto& s : r.revenues)
    rev.push_back({{"id", s.id}, {"ppa", s.ppa}, {"installed_mw", s.installed_mw},
                   {"electricity_sales", s.electricity_sales}, {"rps", s.rps}, {"tmr", s.tmr},
                   {"capacity_reserve", s.capacity_reserve}, {"excess_cap", s.excess_cap},
                   {"net_revenue", s.net_revenue}, {"total_cost", s.total_cost}});
  j["revenues"] = rev;
  json rob = json::array();
  for (const auto& x : r.robustness)
    rob.push_back({{"unmet_hours", x.unmet_hours}, {"unmatched_share", x.unmatched_share}});
  j["robustness"] = rob;
  j["unserved_energy_mwh"] = r.unserved_energy;
  j["unserved_h2_tonnes"] = r.unserved_h2;
  return j.dump(2) + "\n";
}

CaseReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  CaseReport r;
  r.label = j.at("label");
  r.mode = j.at("mode");
  r.scenarios = j.at("scenarios").get<std::vector<std::string>>();
  r.status = j.at("status");
  r.objective = j.at("objective");
  for (const auto& [id, c] : j.at("capacities").items()) {
    CapacityRecord rec;
    rec.existing = c.at("existing");
    rec.retired = c.at("retired");
    rec.added = c.at("added");
    rec.installed = c.at("installed");
    rec.existing_energy = c.at("existing_energy");
    rec.retired_energy = c.at("retired_energy");
    rec.added_energy = c.at("added_energy");
    rec.installed_energy = c.at("installed_energy");
    r.capacities[id] = rec;
  }
  const auto& h2 = j.at("h2_assets");
  r.electrolyzer_mw = h2.at("electrolyzer_mw");
  r.h2_storage_tonnes = h2.at("h2_storage_tonnes");
  r.compressor_tph = h2.at("compressor_tph");
  r.generation = j.at("generation_mwh").get<std::map<std::string, double>>();
  r.emissions = j.at("emissions_tco2");
  r.h2_tonnes = j.at("h2_tonnes");
  if (!j.at("lcoh").is_null()) r.lcoh = lcoh_from(j.at("lcoh"));
  if (!j.at("consequential_emissions").is_null())
    r.consequential_emissions = j.at("consequential_emissions").get<double>();
  if (!j.at("baseline_label").is_null()) r.baseline_label = j.at("baseline_label").get<std::string>();
  r.curtailment = j.at("curtailment").get<std::map<std::string, double>>();
  const auto& p = j.at("prices");
  r.prices.energy_average = p.at("energy_average");
  r.prices.capacity_average = p.at("capacity_average");
  r.prices.capacity_annual = p.at("capacity_annual");
  if (!p.at("rps").is_null()) r.prices.rps = p.at("rps").get<double>();
  if (!p.at("tmr").is_null()) r.prices.tmr = p.at("tmr").get<double>();
  if (!p.at("tmr_histogram").is_null()) {
    Histogram h;
    h.bin_width = p.at("tmr_histogram").at("bin_width");
    h.cap = p.at("tmr_histogram").at("cap");
    h.counts = p.at("tmr_histogram").at("counts").get<std::vector<double>>();
    r.prices.tmr_histogram = h;
  }
  for (const auto& s : j.at("revenues")) {
    RevenueStack x;
    x.id = s.at("id");
    x.ppa = s.at("ppa");
    x.installed_mw = s.at("installed_mw");
    x.electricity_sales = s.at("electricity_sales");
    x.rps = s.at("rps");
    x.tmr = s.at("tmr");
    x.capacity_reserve = s.at("capacity_reserve");
    x.excess_cap = s.at("excess_cap");
    x.net_revenue = s.at("net_revenue");
    x.total_cost = s.at("total_cost");
    r.revenues.push_back(x);
  }
  for (const auto& s : j.at("robustness"))
    r.robustness.push_back({s.at("unmet_hours").get<Index>(), s.at("unmatched_share").get<double>()});
  r.unserved_energy = j.at("unserved_energy_mwh");
  r.unserved_h2 = j.at("unserved_h2_tonnes");
  return r;
}

}  // namespace h2cem::analysis
