#include "h2cem/runs/runs.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "h2cem/io/csv.hpp"
#include "h2cem/lp/dual_series.hpp"
#include "h2cem/lp/external_solver.hpp"
#include "h2cem/lp/lp_format.hpp"
#include "json.hpp"

namespace h2cem::runs {

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::Baseline: return "baseline";
    case RunMode::Deterministic: return "deterministic";
    case RunMode::Stochastic: return "stochastic";
    case RunMode::OosDispatch: return "oos_dispatch";
  }
  return "unknown";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "baseline") return RunMode::Baseline;
  if (s == "deterministic") return RunMode::Deterministic;
  if (s == "stochastic") return RunMode::Stochastic;
  if (s == "oos_dispatch") return RunMode::OosDispatch;
  throw std::invalid_argument("unknown run mode '" + s +
                              "' (expected baseline, deterministic, stochastic or oos_dispatch)");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<int> to_int(std::string_view s) {
  if (s.empty() || s.size() > 6) return std::nullopt;
  int v = 0;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
    v = v * 10 + (ch - '0');
  }
  return v;
}

// "RPS<k>" or "RPS<k>_all".
bool apply_rps_token(const std::string& tok, PolicyConfig& p) {
  if (tok.rfind("RPS", 0) != 0) return false;
  std::string rest = tok.substr(3);
  bool all = false;
  if (rest.size() > 4 && rest.substr(rest.size() - 4) == "_all") {
    all = true;
    rest.resize(rest.size() - 4);
  }
  auto k = to_int(rest);
  if (!k || *k > 100) return false;
  p.rps_kappa = *k / 100.0;
  p.rps_covers_h2 = all;
  return true;
}

void set_matching(TmrKind kind, PolicyConfig& p) {
  if (kind == TmrKind::Hourly && p.tmr != TmrKind::Hourly) p.excess_sales_beta = 0.2;
  if (kind != TmrKind::Hourly) p.excess_sales_beta.reset();
  p.tmr = kind;
  p.alpha_tmr = 1;
}

}  // namespace

std::optional<RunPlan> plan_from_label(const std::string& label, const PolicyConfig& base,
                                       const std::vector<std::string>& scenario_labels) {
  RunPlan plan;
  plan.label = label;
  plan.policy = base;
  if (label == "No_H2" || label == "baseline") {
    plan.mode = RunMode::Baseline;
    plan.policy.tmr = TmrKind::None;
    plan.policy.excess_sales_beta.reset();
    return plan;
  }
  const auto tok = split(label, '-');
  std::size_t i = 0;
  if (tok[0] == "S") {
    plan.mode = RunMode::Stochastic;
    ++i;
  } else if (tok[0].size() > 1 && tok[0][0] == 'D') {
    auto n = to_int(std::string_view(tok[0]).substr(1));
    if (!n || *n < 1 || *n > static_cast<int>(scenario_labels.size())) return std::nullopt;
    plan.mode = RunMode::Deterministic;
    plan.scenarios = {scenario_labels[*n - 1]};
    ++i;
  } else if (apply_rps_token(tok[0], plan.policy) && tok.size() == 1) {
    plan.mode = RunMode::Stochastic;
    return plan;
  } else {
    return std::nullopt;
  }
  if (i >= tok.size()) return std::nullopt;
  if (tok[i] == "N") set_matching(TmrKind::None, plan.policy);
  else if (tok[i] == "A") set_matching(TmrKind::Annual, plan.policy);
  else if (tok[i] == "H") set_matching(TmrKind::Hourly, plan.policy);
  else return std::nullopt;
  ++i;
  for (; i < tok.size(); ++i) {
    const std::string& t = tok[i];
    if (auto pct = to_int(t)) {
      if (plan.policy.tmr != TmrKind::Hourly || *pct > 100) return std::nullopt;
      plan.policy.alpha_tmr = *pct / 100.0;
    } else if (t.size() > 1 && t.back() == 'L') {
      auto h = to_int(std::string_view(t).substr(0, t.size() - 1));
      if (!h) return std::nullopt;
      plan.h2_store_hours = *h;
    } else if (!apply_rps_token(t, plan.policy)) {
      return std::nullopt;
    }
  }
  return plan;
}

SystemCase materialize(const SystemCase& base, const RunPlan& plan) {
  SystemCase c = base;
  c.label = plan.label;
  c.policy = plan.policy;

  if (!plan.scenarios.empty()) {
    c.scenarios.clear();
    for (const auto& label : plan.scenarios) {
      auto it = std::find_if(base.scenarios.begin(), base.scenarios.end(),
                             [&](const WeatherScenario& w) { return w.year_label == label; });
      if (it == base.scenarios.end())
        throw std::invalid_argument(plan.label + ": unknown scenario " + label);
      c.scenarios.push_back(*it);
    }
  }
  if (c.scenarios.empty()) throw std::invalid_argument(plan.label + ": no scenarios selected");
  if (!plan.weights.empty()) {
    if (plan.weights.size() != c.scenarios.size())
      throw std::invalid_argument(plan.label + ": weights and scenarios differ in length");
    const double sum = std::accumulate(plan.weights.begin(), plan.weights.end(), 0.0);
    if (std::abs(sum - 1) > 1e-9)
      throw std::invalid_argument(plan.label + ": weights must sum to 1");
    for (std::size_t s = 0; s < c.scenarios.size(); ++s) c.scenarios[s].weight = plan.weights[s];
  } else {
    for (auto& s : c.scenarios) s.weight = 1.0 / double(c.scenarios.size());
  }
  if (plan.mode == RunMode::Deterministic && c.scenarios.size() != 1)
    throw std::invalid_argument(plan.label + ": deterministic runs take exactly one scenario");

  if (plan.mode == RunMode::Baseline) {
    c.h2_project.reset();
    c.policy.tmr = TmrKind::None;
    c.policy.excess_sales_beta.reset();
    c.policy.rps_covers_h2 = false;
    c.demand.h2_demand = Series::Zero(c.demand.grid_load.size());
    std::erase_if(c.technologies, [](const TechnologySpec& t) { return t.is_ppa_eligible; });
  }
  if (plan.h2_store_hours && c.h2_project) {
    const double peak = c.demand.h2_demand.size() ? c.demand.h2_demand.maxCoeff() : 0.0;
    c.h2_project->h2_store_cap_limit = storage_limit_from_hours(*plan.h2_store_hours, peak);
  }
  return c;
}

model::FirstStageValues extract_design(const model::SolvedCase& sc) {
  model::FirstStageValues d;
  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    const auto& id = sc.system.technologies[k].id;
    const auto& tv = sc.vars.tech[k];
    if (tv.cap_new >= 0) d.new_power[id] = sc.value(tv.cap_new);
    if (tv.cap_new_energy >= 0) d.new_energy[id] = sc.value(tv.cap_new_energy);
    if (tv.cap_retired >= 0) d.retired_power[id] = sc.value(tv.cap_retired);
    if (tv.cap_retired_energy >= 0) d.retired_energy[id] = sc.value(tv.cap_retired_energy);
  }
  d.electrolyzer_mw = sc.value(sc.vars.electrolyzer_cap);
  d.h2_storage_tonnes = sc.value(sc.vars.h2_storage_cap);
  d.compressor_tph = sc.value(sc.vars.compressor_cap);
  return d;
}

model::FirstStageValues design_from_report(const analysis::CaseReport& r) {
  model::FirstStageValues d;
  for (const auto& [id, c] : r.capacities) {
    d.new_power[id] = c.added;
    d.retired_power[id] = c.retired;
    d.new_energy[id] = c.added_energy;
    d.retired_energy[id] = c.retired_energy;
  }
  d.electrolyzer_mw = r.electrolyzer_mw;
  d.h2_storage_tonnes = r.h2_storage_tonnes;
  d.compressor_tph = r.compressor_tph;
  return d;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  io::write_file_atomic(path, text);
}

void emit_models(const lp::LinearProgramd& lp, const std::filesystem::path& dir,
                 const std::string& stem) {
  write_text(dir / (stem + ".mps"), lp::emit_lp_file(lp, lp::FileFormat::Mps));
  write_text(dir / (stem + ".lp"), lp::emit_lp_file(lp, lp::FileFormat::LpText));
}

lp::Solution<double> solve_model(const lp::LinearProgramd& lp, const SolverSettings& settings,
                                 const std::string& stem) {
  if (settings.emit_lp_dir) emit_models(lp, *settings.emit_lp_dir, stem);
  lp::Solution<double> sol;
  if (settings.backend == io::Backend::External) {
    sol = lp::solve_external(lp, {settings.external_command, settings.scratch_dir}, stem);
  } else {
    sol = lp::solve(lp, settings.options);
  }
  if (!sol.optimal()) {
    std::filesystem::path path;
    if (settings.emit_lp_dir) {
      path = *settings.emit_lp_dir / (stem + ".mps");
    } else {
      path = settings.scratch_dir / (stem + ".mps");
      write_text(path, lp::emit_lp_file(lp, lp::FileFormat::Mps));
    }
    throw SolveFailure(stem, sol.status, path);
  }
  return sol;
}

model::Mode design_mode(const RunPlan& plan, const SystemCase& c) {
  if (plan.mode == RunMode::Stochastic) return model::Mode::Stochastic;
  if (plan.mode == RunMode::Baseline && c.scenarios.size() > 1) return model::Mode::Stochastic;
  return model::Mode::Deterministic;
}

}  // namespace

model::SolvedCase run_design(const SystemCase& base, const RunPlan& plan,
                             const SolverSettings& settings) {
  if (plan.mode == RunMode::OosDispatch)
    throw std::invalid_argument(plan.label + ": run_design takes design plans only");
  model::SolvedCase sc;
  sc.system = materialize(base, plan);
  sc.mode = design_mode(plan, sc.system);
  model::AssembleOptions opts;
  opts.mode = sc.mode;
  auto m = model::assemble(sc.system, opts);
  sc.vars = std::move(m.vars);
  sc.solution = solve_model(m.lp, settings, plan.label);
  return sc;
}

namespace {

void check_design_fits(const SystemCase& c, const model::FirstStageValues& d) {
  auto check = [&](const std::map<std::string, double>& values) {
    for (const auto& [id, v] : values)
      if (!c.find_technology(id) && std::abs(v) > 1e-9)
        throw DesignMismatch("design builds " + id + ", which the dispatch case does not have");
  };
  check(d.new_power);
  check(d.new_energy);
  check(d.retired_power);
  check(d.retired_energy);
  if (!c.h2_project && (d.electrolyzer_mw > 0 || d.h2_storage_tonnes > 0 || d.compressor_tph > 0))
    throw DesignMismatch("design has H2 assets but the dispatch case has no H2 project");
  for (const auto& t : c.technologies) {
    if (!t.has_profile()) continue;
    for (const auto& s : c.scenarios)
      if (!s.cf_by_group.count(t.profile))
        throw DesignMismatch("scenario " + s.year_label + " has no " + t.profile + " series for " +
                             t.id);
  }
}

std::string rename_scenario(const std::string& name, Index s) {
  auto p = lp::parse_indexed_name(name);
  if (!p) return name;
  return p->t >= 0 ? model::indexed(p->family, s, p->t) : model::indexed(p->family, s);
}

}  // namespace

OosResult run_oos(const SystemCase& base, const RunPlan& plan, const model::FirstStageValues& design,
                  const std::vector<std::string>& design_scenarios, const SolverSettings& settings) {
  RunPlan p = plan;
  if (p.scenarios.empty()) {
    const std::set<std::string> in_sample(design_scenarios.begin(), design_scenarios.end());
    for (const auto& s : base.scenarios)
      if (!in_sample.count(s.year_label)) p.scenarios.push_back(s.year_label);
    if (p.scenarios.empty())
      throw DesignMismatch(plan.label + ": no scenarios outside the design set");
  }
  p.weights.clear();
  const SystemCase c = materialize(base, p);
  check_design_fits(c, design);

  model::AssembleOptions opts;
  opts.mode = model::Mode::OutOfSample;
  opts.fixed = design;
  opts.tmr_slack = c.policy.tmr == TmrKind::Hourly;

  OosResult out;
  for (const auto& scen : c.scenarios) {
    model::SolvedCase sc;
    sc.system = c;
    sc.system.scenarios = {scen};
    sc.system.scenarios[0].weight = 1;
    sc.mode = model::Mode::OutOfSample;
    auto m = model::assemble(sc.system, opts);
    sc.vars = std::move(m.vars);
    sc.solution = solve_model(m.lp, settings, plan.label + "." + scen.year_label);
    out.per_scenario.push_back(std::move(sc));
  }

  // Scenario problems are independent given the design, so the joint record
  // is a relabelling of their columns and a probability scaling of their duals.
  auto& all = out.combined;
  all.system = c;
  all.mode = model::Mode::OutOfSample;
  auto m = model::assemble(c, opts);
  all.vars = std::move(m.vars);
  auto& sol = all.solution;
  sol.status = lp::SolveStatus::Optimal;
  sol.names = std::make_shared<const lp::NameTable>(m.lp.names());
  sol.primal.setZero(m.lp.num_variables());
  sol.dual.setZero(m.lp.num_constraints());
  for (std::size_t s = 0; s < out.per_scenario.size(); ++s) {
    const auto& part = out.per_scenario[s].solution;
    const double prob = c.scenarios[s].weight;
    sol.iterations += part.iterations;
    for (std::size_t j = 0; j < part.names->variables.size(); ++j) {
      auto k = m.lp.find_variable(rename_scenario(part.names->variables[j], Index(s)));
      if (!k) throw std::logic_error("dispatch column without a joint counterpart");
      sol.primal[*k] = part.primal[j];
    }
    for (std::size_t i = 0; i < part.names->constraints.size(); ++i) {
      const auto& name = part.names->constraints[i];
      auto k = m.lp.find_constraint(rename_scenario(name, Index(s)));
      if (!k) throw std::logic_error("dispatch row without a joint counterpart");
      if (lp::parse_indexed_name(name)) sol.dual[*k] = prob * part.dual[i];
      else sol.dual[*k] += prob * part.dual[i];
    }
  }
  lp::complete_solution(m.lp, sol);
  return out;
}

// Outputs ---------------------------------------------------------------------

namespace {

std::string provenance(const std::string& hash, std::uint64_t seed) {
  return "# config_hash=" + hash + " seed=" + std::to_string(seed) + "\n";
}

std::string fmt(double v) {
  if (std::abs(v) < 1e-12) v = 0;  // avoid "-0"
  return io::format_double(v);
}

std::string capacities_csv(const analysis::CaseReport& r) {
  std::ostringstream out;
  out << "resource,existing,retired,added,installed,existing_energy,retired_energy,added_energy,"
         "installed_energy\n";
  for (const auto& [id, c] : r.capacities)
    out << id << ',' << fmt(c.existing) << ',' << fmt(c.retired) << ',' << fmt(c.added) << ','
        << fmt(c.installed) << ',' << fmt(c.existing_energy) << ',' << fmt(c.retired_energy)
        << ',' << fmt(c.added_energy) << ',' << fmt(c.installed_energy) << '\n';
  auto h2 = [&](const char* name, double v) {
    out << name << ",0,0," << fmt(v) << ',' << fmt(v) << ",0,0,0,0\n";
  };
  h2("electrolyzer_mw", r.electrolyzer_mw);
  h2("h2_storage_tonnes", r.h2_storage_tonnes);
  h2("compressor_tph", r.compressor_tph);
  return out.str();
}

std::string dispatch_csv(const model::SolvedCase& sc) {
  struct Column {
    std::string name;
    model::Block block;
  };
  std::vector<Column> cols;
  for (std::size_t k = 0; k < sc.system.technologies.size(); ++k) {
    const auto& id = sc.system.technologies[k].id;
    const auto& tv = sc.vars.tech[k];
    if (tv.gen.present()) cols.push_back({"gen_" + id, tv.gen});
    if (tv.commit.present()) cols.push_back({"commit_" + id, tv.commit});
    if (tv.charge.present()) cols.push_back({"charge_" + id, tv.charge});
    if (tv.discharge.present()) cols.push_back({"discharge_" + id, tv.discharge});
    if (tv.soc.present()) cols.push_back({"soc_" + id, tv.soc});
  }
  const std::pair<const char*, model::Block> extra[] = {
      {"h2_gen", sc.vars.h2_gen},         {"h2_charge", sc.vars.h2_charge},
      {"h2_discharge", sc.vars.h2_discharge}, {"h2_soc", sc.vars.h2_soc},
      {"nse_power", sc.vars.nse_power},   {"nse_h2", sc.vars.nse_h2},
      {"tmr_slack", sc.vars.tmr_slack}};
  for (const auto& [name, b] : extra)
    if (b.present()) cols.push_back({name, b});

  std::ostringstream out;
  out << "scenario,hour";
  for (const auto& c : cols) out << ',' << c.name;
  out << '\n';
  for (Index s = 0; s < sc.vars.scenarios; ++s) {
    for (Index t = 0; t < sc.vars.hours; ++t) {
      out << sc.system.scenarios[s].year_label << ',' << (t + 1);
      for (const auto& c : cols) out << ',' << fmt(sc.value(c.block(s, t)));
      out << '\n';
    }
  }
  return out.str();
}

std::string duals_csv(const model::SolvedCase& sc) {
  std::ostringstream out;
  out << "family,scenario,hour,price\n";
  for (const char* family : {"power_balance", "h2_balance", "crm", "tmr_hourly", "rps",
                             "tmr_annual", "excess_cap"}) {
    std::optional<lp::DualSeries> d;
    try {
      d = lp::dual_series(sc.solution, family);
    } catch (const lp::UnknownFamilyError&) {
      continue;
    }
    const bool hourly = d->hours == sc.vars.hours && std::string(family) != "rps" &&
                        std::string(family) != "tmr_annual" && std::string(family) != "excess_cap";
    for (Index s = 0; s < d->scenarios; ++s) {
      const double w = sc.system.scenarios[s].weight * sc.system.hour_weight();
      for (Index t = 0; t < d->hours; ++t) {
        const auto& v = d->at(s, t);
        if (!v) continue;
        out << family << ',' << sc.system.scenarios[s].year_label << ',';
        if (hourly) out << (t + 1);
        out << ',' << fmt(*v / w) << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace

void write_outputs(const model::SolvedCase& sc, const analysis::CaseReport& report,
                   const std::filesystem::path& dir, const std::string& hash, std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  const std::string head = provenance(hash, seed);
  // report.json goes last: its presence marks the label complete.
  std::filesystem::remove(dir / "report.json");
  io::write_file_atomic(dir / "capacities.csv", head + capacities_csv(report));
  io::write_file_atomic(dir / "dispatch.csv", head + dispatch_csv(sc));
  io::write_file_atomic(dir / "duals.csv", head + duals_csv(sc));
  io::write_file_atomic(dir / "report.json", analysis::report_to_json(report, hash, seed));
}

bool glob_match(std::string_view pattern, std::string_view text) {
  std::size_t p = 0, t = 0, star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

// Execution -------------------------------------------------------------------

namespace {

struct Job {
  const RunPlan* plan;
  int phase;
};

int phase_of(RunMode m) {
  switch (m) {
    case RunMode::Baseline: return 0;
    case RunMode::OosDispatch: return 2;
    default: return 1;
  }
}

std::optional<analysis::CaseReport> load_report(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return analysis::report_from_json(io::read_file(path));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool is_current(const std::filesystem::path& path, const std::string& hash, std::uint64_t seed) {
  if (!std::filesystem::exists(path)) return false;
  try {
    const auto j = nlohmann::json::parse(io::read_file(path));
    return j.at("config_hash") == hash && j.at("seed") == seed && j.at("status") == "optimal";
  } catch (const std::exception&) {
    return false;
  }
}

// Baseline sharing the run's scenarios and RPS settings.
const RunPlan* matching_baseline(const io::ProjectConfig& cfg, const RunPlan& plan,
                                 const std::vector<std::string>& scenarios) {
  for (const auto& b : cfg.runs) {
    if (b.mode != RunMode::Baseline) continue;
    std::vector<std::string> bs = b.scenarios;
    if (bs.empty())
      for (const auto& s : cfg.base.scenarios) bs.push_back(s.year_label);
    if (bs != scenarios) continue;
    if (b.policy.rps_kappa != plan.policy.rps_kappa) continue;
    return &b;
  }
  return nullptr;
}

}  // namespace

ExecuteSummary execute(const io::ProjectConfig& cfg, const ExecuteOptions& opts) {
  ExecuteSummary summary;
  const std::string hash = io::hex64(cfg.hash);
  std::mutex mu;
  auto log = [&](const std::string& msg) {
    if (!opts.log) return;
    std::lock_guard lock(mu);
    opts.log(msg);
  };

  std::vector<Job> jobs;
  for (const auto& p : cfg.runs)
    if (glob_match(opts.labels, p.label)) jobs.push_back({&p, phase_of(p.mode)});
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    return a.phase != b.phase ? a.phase < b.phase : a.plan->label < b.plan->label;
  });

  auto run_one = [&](const RunPlan& plan) {
    const auto dir = cfg.output_dir / plan.label;
    if (!opts.force && is_current(dir / "report.json", hash, cfg.seed)) {
      std::lock_guard lock(mu);
      summary.skipped.push_back(plan.label);
      if (opts.log) opts.log("skip  " + plan.label + " (up to date)");
      return;
    }
    log("start " + plan.label);
    SolverSettings settings = opts.solver;
    settings.options.seed = cfg.seed;
    settings.scratch_dir = settings.scratch_dir / hash;
    try {
      model::SolvedCase sc;
      if (plan.mode == RunMode::OosDispatch) {
        const auto design = load_report(cfg.output_dir / plan.design / "report.json");
        if (!design || design->status != "optimal")
          throw DesignMismatch("design " + plan.design + " has no completed result");
        // Dispatch runs under the design's policy and tank limit.
        RunPlan effective = plan;
        for (const auto& d : cfg.runs) {
          if (d.label != plan.design) continue;
          effective.policy = d.policy;
          effective.h2_store_hours = d.h2_store_hours;
        }
        sc = run_oos(cfg.base, effective, design_from_report(*design), design->scenarios, settings)
                 .combined;
      } else {
        sc = run_design(cfg.base, plan, settings);
      }
      auto report = analysis::build_report(sc, plan.label);
      if (plan.mode != RunMode::Baseline && report.h2_tonnes > 0) {
        if (const RunPlan* b = matching_baseline(cfg, plan, report.scenarios)) {
          if (auto br = load_report(cfg.output_dir / b->label / "report.json");
              br && br->status == "optimal") {
            report.baseline_label = b->label;
            report.consequential_emissions =
                analysis::consequential_emissions(report.emissions, br->emissions, report.h2_tonnes);
          }
        }
      }
      write_outputs(sc, report, dir, hash, cfg.seed);
      std::lock_guard lock(mu);
      summary.solved.push_back(plan.label);
      if (opts.log)
        opts.log("done  " + plan.label + " objective " + io::format_double(report.objective));
    } catch (const SolveFailure& e) {
      std::lock_guard lock(mu);
      summary.failed[plan.label] = e.what();
      summary.any_solve_failure = true;
      if (opts.log) opts.log("FAIL  " + std::string(e.what()));
    } catch (const std::exception& e) {
      std::lock_guard lock(mu);
      summary.failed[plan.label] = e.what();
      if (opts.log) opts.log("FAIL  " + plan.label + ": " + e.what());
    }
  };

  const int workers = std::max(1, opts.workers);
  for (int phase = 0; phase <= 2; ++phase) {
    std::vector<const RunPlan*> batch;
    for (const auto& j : jobs)
      if (j.phase == phase) batch.push_back(j.plan);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < batch.size(); i = next++) run_one(*batch[i]);
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(workers, static_cast<int>(batch.size()));
    for (int w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  std::sort(summary.solved.begin(), summary.solved.end());
  std::sort(summary.skipped.begin(), summary.skipped.end());
  return summary;
}

}  // namespace h2cem::runs
