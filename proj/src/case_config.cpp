#include "h2cem/io/case_config.hpp"

#include <cstdio>
#include <set>

#include "h2cem/io/csv.hpp"
#include "json.hpp"

namespace h2cem::io {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

// Field access with a JSON-pointer-like path for error messages. Keys not
// read by the time `finish` runs are reported as unknown.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at_path(const std::string& key) const { return path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    return number(key);
  }
  double number(const std::string& key) {
    if (!has(key)) throw ConfigError(at_path(key) + ": required field missing");
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at_path(key) + ": expected a number");
    return v.get<double>();
  }
  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || raw(key).is_null()) return std::nullopt;
    return number(key);
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(at_path(key) + ": expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    return string(key);
  }
  std::string string(const std::string& key) {
    if (!has(key)) throw ConfigError(at_path(key) + ": required field missing");
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at_path(key) + ": expected a string");
    return v.get<std::string>();
  }
  const json& array(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at_path(key) + ": expected an array");
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at_path(it.key()) + ": unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
auto with_context(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

TechnologySpec parse_technology(const json& j, const std::string& path) {
  Obj o(j, path);
  TechnologySpec t;
  t.id = o.string("id");
  t.kind = with_context(o.at_path("kind"), [&] { return tech_kind_from_string(o.string("kind")); });
  t.profile = o.string("profile", "");
  t.existing_capacity = o.number("existing_capacity", 0);
  t.existing_energy = o.number("existing_energy", 0);
  t.expandable = o.boolean("expandable", false);
  t.retirable = o.boolean("retirable", false);
  t.inv_cost_power_annualized = o.number("inv_cost_power_annualized", 0);
  t.inv_cost_energy_annualized = o.number("inv_cost_energy_annualized", 0);
  t.fom_power = o.number("fom_power", 0);
  t.fom_energy = o.number("fom_energy", 0);
  t.vom = o.number("vom", 0);
  t.heat_rate = o.number("heat_rate", 0);
  if (o.has("fuel_id") && !o.raw("fuel_id").is_null()) t.fuel_id = o.string("fuel_id");
  const bool thermal = t.kind == TechKind::Thermal;
  t.min_stable_fraction = o.number("min_stable_fraction", 0);
  t.ramp_up = o.number("ramp_up", 1);
  t.ramp_down = o.number("ramp_down", 1);
  t.start_cost = o.number("start_cost", 0);
  t.start_fuel = o.number("start_fuel", 0);
  t.unit_size = o.number("unit_size", thermal ? 100 : 0);
  t.max_availability = o.number("max_availability", 1);
  t.crm_derate = o.number("crm_derate", 0);
  t.duration_min = o.number("duration_min", 0.15);
  t.duration_max = o.number("duration_max", 12);
  t.self_discharge = o.number("self_discharge", t.is_storage() ? 2e-5 : 0);
  t.charge_efficiency = o.number("charge_efficiency", 1);
  t.discharge_efficiency = o.number("discharge_efficiency", 1);
  t.is_ppa_eligible = o.boolean("is_ppa_eligible", false);
  t.is_rps_eligible = o.boolean("is_rps_eligible", false);
  o.finish();
  return t;
}

H2ProjectSpec parse_h2(const json& j) {
  Obj o(j, "h2_project");
  H2ProjectSpec h;
  h.electrolyzer_power_per_tonne = o.number("electrolyzer_power_per_tonne", h.electrolyzer_power_per_tonne);
  h.compressor_power_per_tonne = o.number("compressor_power_per_tonne", h.compressor_power_per_tonne);
  h.electrolyzer_inv_annualized = o.number("electrolyzer_inv_annualized", h.electrolyzer_inv_annualized);
  h.electrolyzer_fom = o.number("electrolyzer_fom", h.electrolyzer_fom);
  h.electrolyzer_vom = o.number("electrolyzer_vom", h.electrolyzer_vom);
  h.h2_store_inv_energy_annualized =
      o.number("h2_store_inv_energy_annualized", h.h2_store_inv_energy_annualized);
  h.compressor_inv_annualized = o.number("compressor_inv_annualized", h.compressor_inv_annualized);
  h.h2_store_cap_limit = o.optional_number("h2_store_cap_limit");
  h.electrolyzer_min_output_fraction =
      o.number("electrolyzer_min_output_fraction", h.electrolyzer_min_output_fraction);
  h.electrolyzer_ramp = o.number("electrolyzer_ramp", h.electrolyzer_ramp);
  h.electrolyzer_availability = o.number("electrolyzer_availability", h.electrolyzer_availability);
  h.h2_lhv = o.number("h2_lhv", h.h2_lhv);
  h.crm_derate = o.number("crm_derate", h.crm_derate);
  h.storage_charge_efficiency = o.number("storage_charge_efficiency", h.storage_charge_efficiency);
  h.storage_discharge_efficiency =
      o.number("storage_discharge_efficiency", h.storage_discharge_efficiency);
  o.finish();
  return h;
}

PolicyConfig parse_policy_json(const json& j, const std::string& path) {
  Obj o(j, path);
  PolicyConfig p;
  p.tmr = with_context(o.at_path("tmr"), [&] { return tmr_kind_from_string(o.string("tmr", "none")); });
  p.alpha_tmr = o.number("alpha_tmr", 1.0);
  if (o.has("excess_sales_beta"))
    p.excess_sales_beta = o.optional_number("excess_sales_beta");
  else if (p.tmr == TmrKind::Hourly)
    p.excess_sales_beta = 0.2;
  p.rps_kappa = o.optional_number("rps_kappa");
  p.rps_covers_h2 = o.boolean("rps_covers_h2", false);
  p.crm_alpha = o.number("crm_alpha", p.crm_alpha);
  p.tmr_includes_compressor = o.boolean("tmr_includes_compressor", false);
  if (o.has("penalties")) {
    Obj q(o.raw("penalties"), path + ".penalties");
    p.penalties.voll = q.number("voll", p.penalties.voll);
    p.penalties.unserved_h2 = q.number("unserved_h2", p.penalties.unserved_h2);
    p.penalties.rps_slack = q.number("rps_slack", p.penalties.rps_slack);
    p.penalties.tmr_slack = q.number("tmr_slack", p.penalties.tmr_slack);
    q.finish();
  }
  o.finish();
  return p;
}

struct Loaded {
  SystemCase c;
  json policy;  // unparsed, so run overrides can be merged key by key
  std::string data_bytes;
};

Loaded load_case(const json& j, const fs::path& root) {
  Obj o(j, "case");
  Loaded out;
  SystemCase& c = out.c;
  c.label = o.string("label", "case");

  if (o.has("fuels")) {
    const json& fuels = o.array("fuels");
    for (std::size_t i = 0; i < fuels.size(); ++i) {
      Obj f(fuels[i], "fuels[" + std::to_string(i) + "]");
      c.fuels.push_back({f.string("id"), f.number("price"), f.number("co2_factor", 0)});
      f.finish();
    }
  }
  const json& techs = o.array("technologies");
  for (std::size_t i = 0; i < techs.size(); ++i)
    c.technologies.push_back(parse_technology(techs[i], "technologies[" + std::to_string(i) + "]"));
  if (o.has("h2_project") && !o.raw("h2_project").is_null()) c.h2_project = parse_h2(o.raw("h2_project"));

  {
    Obj d(o.raw("demand"), "demand");
    const fs::path file = root / d.string("csv");
    out.data_bytes += read_file(file);
    const HourlyTable table = read_hourly_csv(file);
    const std::string load_col = d.string("grid_load", "grid_load");
    if (!table.series.count(load_col))
      throw ConfigError("demand.grid_load: column '" + load_col + "' not in " + file.string());
    c.demand.grid_load = table.at(load_col);
    if (d.has("h2_demand_constant")) {
      c.demand.h2_demand = Series::Constant(table.hours, d.number("h2_demand_constant"));
    } else if (d.has("h2_demand")) {
      const std::string col = d.string("h2_demand");
      if (!table.series.count(col))
        throw ConfigError("demand.h2_demand: column '" + col + "' not in " + file.string());
      c.demand.h2_demand = table.at(col);
    } else {
      c.demand.h2_demand = Series::Zero(table.hours);
    }
    d.finish();
  }

  const json& scen = o.array("scenarios");
  for (std::size_t i = 0; i < scen.size(); ++i) {
    Obj s(scen[i], "scenarios[" + std::to_string(i) + "]");
    WeatherScenario ws;
    ws.year_label = s.string("label");
    const fs::path file = root / s.string("csv");
    out.data_bytes += read_file(file);
    const HourlyTable table = read_hourly_csv(file);
    for (const auto& name : table.names) ws.cf_by_group[name] = table.at(name);
    ws.weight = s.number("weight", 1.0 / double(scen.size()));
    s.finish();
    c.scenarios.push_back(std::move(ws));
  }

  out.policy = o.has("policy") ? o.raw("policy") : json::object();
  c.policy = parse_policy_json(out.policy, "policy");
  o.finish();
  return out;
}

json merge_policy(json base, const json& overrides, const std::string& path) {
  if (!overrides.is_object()) throw ConfigError(path + ": expected an object");
  for (auto it = overrides.begin(); it != overrides.end(); ++it) {
    if (it.key() == "penalties" && base.contains("penalties") && it.value().is_object()) {
      for (auto p = it.value().begin(); p != it.value().end(); ++p)
        base["penalties"][p.key()] = p.value();
    } else {
      base[it.key()] = it.value();
    }
  }
  // An override that switches the matching kind drops an inherited cap.
  if (overrides.contains("tmr") && !overrides.contains("excess_sales_beta"))
    base.erase("excess_sales_beta");
  return base;
}

runs::RunPlan parse_run(const json& j, const std::string& path, const Loaded& loaded) {
  Obj o(j, path);
  std::vector<std::string> labels;
  for (const auto& s : loaded.c.scenarios) labels.push_back(s.year_label);
  runs::RunPlan plan;
  plan.label = o.string("label");
  auto from_label = runs::plan_from_label(plan.label, loaded.c.policy, labels);
  if (from_label) plan = *from_label;
  if (o.has("mode"))
    plan.mode = with_context(o.at_path("mode"),
                             [&] { return runs::run_mode_from_string(o.string("mode")); });
  else if (!from_label)
    throw ConfigError(o.at_path("mode") + ": required unless the label follows the convention");
  if (o.has("scenarios")) {
    plan.scenarios.clear();
    for (const auto& s : o.array("scenarios")) {
      if (!s.is_string()) throw ConfigError(o.at_path("scenarios") + ": expected strings");
      plan.scenarios.push_back(s.get<std::string>());
    }
  }
  if (o.has("weights")) {
    plan.weights.clear();
    for (const auto& w : o.array("weights")) {
      if (!w.is_number()) throw ConfigError(o.at_path("weights") + ": expected numbers");
      plan.weights.push_back(w.get<double>());
    }
  }
  plan.design = o.string("design", plan.design);
  if (o.has("policy")) {
    json merged = loaded.policy;
    if (from_label) {
      // Label-derived settings sit between the case policy and explicit overrides.
      merged["tmr"] = to_string(plan.policy.tmr);
      merged["alpha_tmr"] = plan.policy.alpha_tmr;
      if (plan.policy.rps_kappa) merged["rps_kappa"] = *plan.policy.rps_kappa;
      merged["rps_covers_h2"] = plan.policy.rps_covers_h2;
    }
    plan.policy = parse_policy_json(merge_policy(merged, o.raw("policy"), o.at_path("policy")),
                                    o.at_path("policy"));
  }
  if (o.has("h2_store_hours")) plan.h2_store_hours = o.optional_number("h2_store_hours");
  o.finish();
  if (plan.mode == runs::RunMode::OosDispatch && plan.design.empty())
    throw ConfigError(o.at_path("design") + ": oos_dispatch runs need a design label");
  return plan;
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON parse error: " + e.what());
  }
}

}  // namespace

SystemCase parse_case(std::string_view json_text, const fs::path& root) {
  return load_case(parse_json(std::string(json_text), "<case>"), root).c;
}

PolicyConfig parse_policy(std::string_view json_text) {
  return parse_policy_json(parse_json(std::string(json_text), "<policy>"), "policy");
}

ProjectConfig load_config(const fs::path& path) {
  const std::string text = read_file(path);
  const json j = parse_json(text, path.string());
  const fs::path root = path.has_parent_path() ? path.parent_path() : fs::path(".");
  Obj o(j, "config");
  ProjectConfig cfg;
  cfg.source = path;

  std::string hashed = j.dump();
  const Loaded loaded = load_case(o.raw("case"), root);
  cfg.base = loaded.c;
  hashed += loaded.data_bytes;

  const json* runs_json = nullptr;
  json manifest;
  if (o.has("manifest")) {
    const fs::path mpath = root / o.string("manifest");
    const std::string mtext = read_file(mpath);
    hashed += mtext;
    manifest = parse_json(mtext, mpath.string());
    Obj m(manifest, "manifest");
    runs_json = &m.array("runs");
    m.finish();
  }
  if (o.has("runs")) {
    if (runs_json) throw ConfigError("config.runs: give either runs or manifest, not both");
    runs_json = &o.array("runs");
  }
  std::set<std::string> labels;
  if (runs_json) {
    for (std::size_t i = 0; i < runs_json->size(); ++i) {
      auto plan = parse_run((*runs_json)[i], "runs[" + std::to_string(i) + "]", loaded);
      if (!labels.insert(plan.label).second)
        throw ConfigError("runs[" + std::to_string(i) + "].label: duplicate label " + plan.label);
      cfg.runs.push_back(std::move(plan));
    }
  }
  for (const auto& r : cfg.runs)
    if (r.mode == runs::RunMode::OosDispatch && !labels.count(r.design))
      throw ConfigError("runs[" + r.label + "].design: unknown design label " + r.design);

  if (o.has("solver")) {
    Obj s(o.raw("solver"), "solver");
    cfg.solver.feas_tol = s.number("feas_tol", cfg.solver.feas_tol);
    cfg.solver.opt_tol = s.number("opt_tol", cfg.solver.opt_tol);
    const std::string backend = s.string("backend", "embedded");
    if (backend == "embedded") cfg.solver.backend = Backend::Embedded;
    else if (backend == "external") cfg.solver.backend = Backend::External;
    else throw ConfigError("solver.backend: expected embedded or external");
    cfg.solver.external_command = s.string("external_command", "");
    cfg.solver.external_provides_duals = s.boolean("external_provides_duals", true);
    s.finish();
    if (!cfg.solver.external_provides_duals)
      throw ConfigError("solver.external_provides_duals: backends without duals are not supported");
  }
  cfg.output_dir = root / o.string("output_dir", "runs");
  if (o.has("seed")) {
    const json& sj = o.raw("seed");
    if (!sj.is_number_unsigned()) throw ConfigError("config.seed: expected an unsigned integer");
    cfg.seed = sj.get<std::uint64_t>();
  }
  cfg.workers = static_cast<int>(o.number("workers", 0));
  cfg.plots = o.boolean("plots", true);
  o.finish();
  cfg.hash = fnv1a(hashed);
  return cfg;
}

}  // namespace h2cem::io
