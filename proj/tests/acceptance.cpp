// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "h2cem/analysis.hpp"
#include "h2cem/domain.hpp"
#include "h2cem/runs/runs.hpp"
#include "h2cem/scenarios.hpp"
#include "oracles.hpp"

using namespace h2cem;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Solved {
  model::AssembledModel m;
  model::SolvedCase sc;
};

Solved solve(const SystemCase& c, model::AssembleOptions opts = {}) {
  Solved out{model::assemble(c, opts), {}};
  out.sc = {c, out.m.vars, lp::solve(out.m.lp), opts.mode};
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double row_residual(const lp::LinearProgramd& lp, const lp::Solution<double>& sol,
                    const std::string& name) {
  const auto i = lp.find_constraint(name);
  if (!i) return 0;
  return std::abs(sol.row_activity[*i] - lp.constraint(*i).rhs);
}

// Balance closure, storage bounds and cyclic state, curtailment range.
void check_conservation(const Solved& s, Outcome& o) {
  const auto& c = s.sc.system;
  const auto& v = s.m.vars;
  const auto& sol = s.sc.solution;
  const double peak = c.demand.grid_load.maxCoeff();
  const double tol = 1e-6;
  double worst_balance = 0, worst_soc = 0, worst_cycle = 0;
  for (Index sc = 0; sc < v.scenarios; ++sc) {
    for (Index t = 0; t < v.hours; ++t)
      worst_balance =
          std::max(worst_balance, row_residual(s.m.lp, sol, model::indexed("power_balance", sc, t)));
    for (std::size_t k = 0; k < c.technologies.size(); ++k) {
      const auto& spec = c.technologies[k];
      if (!spec.is_storage()) continue;
      const auto& tv = v.tech[k];
      double energy = spec.existing_energy;
      if (tv.cap_new_energy >= 0) energy += sol.primal[tv.cap_new_energy];
      if (tv.cap_retired_energy >= 0) energy -= sol.primal[tv.cap_retired_energy];
      for (Index t = 0; t < v.hours; ++t) {
        const double soc = sol.primal[tv.soc(sc, t)];
        worst_soc = std::max({worst_soc, -soc, soc - energy});
      }
      // The first hour's balance links back to the last hour's state.
      worst_cycle = std::max(worst_cycle,
                             row_residual(s.m.lp, sol, model::indexed("soc_" + spec.id, sc, 0)));
    }
    if (v.h2_soc.present()) {
      const double cap = sol.primal[v.h2_storage_cap];
      for (Index t = 0; t < v.hours; ++t) {
        const double soc = sol.primal[v.h2_soc(sc, t)];
        worst_soc = std::max({worst_soc, -soc, soc - cap});
      }
      worst_cycle = std::max(worst_cycle, row_residual(s.m.lp, sol, model::indexed("h2_soc", sc, 0)));
    }
  }
  o.require(worst_balance <= tol * peak, "power balance residual");
  o.require(worst_soc <= tol, "state of charge bounds");
  o.require(worst_cycle <= tol, "cyclic state of charge");
  for (const auto& [id, f] : analysis::curtailment_fraction(s.sc))
    o.require(f >= 0 && f <= 1, "curtailment of " + id);
}

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order at the end
int conservation_checks = 0;
Outcome conservation;

void record(const Solved& s) {
  if (!s.sc.solution.optimal()) {
    conservation.require(false, "non-optimal fixture " + s.sc.system.label);
    return;
  }
  check_conservation(s, conservation);
  ++conservation_checks;
}

void report(int id, const std::string& title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0) {
    o.require(secs < budget_s, "runtime budget");
  }
  if (!o.pass) ++failures;
  char timing[32];
  std::snprintf(timing, sizeof timing, " (%.2fs)", secs);
  lines[id] = std::string(o.pass ? "PASS " : "FAIL ") + (id < 10 ? " " : "") + std::to_string(id) +
              " " + title + ":" + o.detail.str() + timing;
}

// --- criterion 7 fixture ---------------------------------------------------

constexpr Index kHours = 24;

Series flat(double v) { return Series::Constant(kHours, v); }

Series with_lull(double level, double lull) {
  Series s = flat(level);
  s.segment(10, 4).setConstant(lull);
  return s;
}

SystemCase robustness_case() {
  auto c = fixtures::desk_case(TmrKind::None, 1, kHours);
  c.scenarios = {fixtures::scenario("high", flat(0.6)),       fixtures::scenario("mid", flat(0.4)),
                 fixtures::scenario("lull", with_lull(0.4, 0.0)),
                 fixtures::scenario("oos_low", with_lull(0.45, 0.02)),
                 fixtures::scenario("oos_mid", flat(0.5))};
  for (auto& s : c.scenarios) s.weight = 0.2;
  return c;
}

}  // namespace

int main() {
  report(1, "annualized H2 asset costs within 0.5%", 1, [](Outcome& o) {
    const double ely = annuitize(1937791.0, 20.0, 0.04), comp = annuitize(2451496.0, 15.0, 0.04),
                 tank = annuitize(587000.0, 30.0, 0.04);
    o.detail << " electrolyzer " << ely << ", compressor " << comp << ", tank " << tank;
    o.require(rel(ely, 142586) <= 0.005, "electrolyzer");
    o.require(rel(comp, 220490) <= 0.005, "compressor");
    o.require(rel(tank, 33929) <= 0.005, "tank");
  });

  report(2, "certificate cost per kg", 0, [](Outcome& o) {
    const double rps = analysis::eac_cost(54.3, 0.6, 25.7), tmr = analysis::eac_cost(54.3, 1.0, 26.0);
    o.detail << " RPS " << rps << " $/kg, TMR " << tmr << " $/kg, ratio " << tmr / rps;
    o.require(std::abs(rps - 0.84) <= 0.01, "0.84");
    o.require(std::abs(tmr - 1.41) <= 0.01, "1.41");
    o.require(std::abs(tmr / rps - 1.67) <= 0.03, "ratio");
  });

  report(3, "electrolyzer draw for 18.4 t/h", 0, [](Outcome& o) {
    const double d = electrolyzer_draw(18.4, H2ProjectSpec{});
    o.detail << " " << d << " MW";
    o.require(std::abs(d - 999.12) <= 1e-6, "999.12");
  });

  report(4, "simplex vs vertex enumeration on 100 random LPs", 10, [](Outcome& o) {
    std::mt19937_64 rng(4);
    int optimal = 0, infeasible = 0;
    double worst_obj = 0, worst_cs = 0;
    for (int k = 0; k < 100; ++k) {
      const auto lp = oracle::random_lp(rng);
      const auto ref = oracle::enumerate_vertices(lp);
      const auto sol = lp::solve(lp);
      if (!ref.feasible) {
        o.require(sol.status == lp::SolveStatus::Infeasible, "infeasible status");
        ++infeasible;
        continue;
      }
      if (!sol.optimal()) {
        o.require(false, "optimal status");
        continue;
      }
      ++optimal;
      worst_obj = std::max(worst_obj, std::abs(sol.objective - ref.objective) /
                                          std::max(1.0, std::abs(ref.objective)));
      for (Index i = 0; i < lp.num_constraints(); ++i)
        worst_cs = std::max(worst_cs,
                            std::abs(sol.dual[i] * (sol.row_activity[i] - lp.constraint(i).rhs)));
      for (Index j = 0; j < lp.num_variables(); ++j) {
        const auto& v = lp.variable(j);
        const double gap = std::min(std::abs(sol.primal[j] - v.lower), std::abs(sol.primal[j] - v.upper));
        worst_cs = std::max(worst_cs, std::abs(sol.reduced_cost[j]) * gap);
      }
    }
    o.detail << " " << optimal << " optimal, " << infeasible << " infeasible; max rel obj gap "
             << worst_obj << ", max complementarity " << worst_cs;
    o.require(worst_obj <= 1e-9, "objective");
    o.require(worst_cs <= 1e-7, "complementary slackness");
  });

  report(5, "cost recovery and PPA rent under hourly matching (168 h)", 0, [](Outcome& o) {
    auto c = fixtures::desk_case(TmrKind::Hourly, 1, 168);
    int resources = 0;
    double max_rent = 0, uncapped_rent = 0;
    for (bool capped : {true, false}) {
      if (!capped) c.policy.excess_sales_beta.reset();
      const auto s = solve(c);
      record(s);
      o.require(s.sc.solution.optimal(), "optimal");
      for (const auto& st : analysis::revenue_stack(s.sc)) {
        ++resources;
        o.require(st.net_revenue >= st.total_cost * (1 - 1e-4), "revenue >= cost for " + st.id);
        if (st.ppa) {
          o.require(st.rent() >= -1e-4 * st.total_cost, "nonnegative rent");
          (capped ? max_rent : uncapped_rent) =
              std::max(capped ? max_rent : uncapped_rent, std::abs(st.per_mw(st.rent())));
          if (!capped) o.require(std::abs(st.rent()) <= 1e-4 * st.total_cost, "rent vanishes");
        }
      }
    }
    o.detail << " " << resources << " stacks; PPA rent " << max_rent << " $/MW-yr capped, "
             << uncapped_rent << " uncapped";
  });

  report(6, "LCOH ordering none <= annual <= hourly 0.8 <= 0.9 <= 1.0 (168 h)", 0, [](Outcome& o) {
    const std::pair<TmrKind, double> grid[] = {{TmrKind::None, 1},   {TmrKind::Annual, 1},
                                               {TmrKind::Hourly, .8}, {TmrKind::Hourly, .9},
                                               {TmrKind::Hourly, 1}};
    double prev = -std::numeric_limits<double>::infinity();
    o.detail << " $/kg:";
    for (const auto& [tmr, alpha] : grid) {
      const auto s = solve(fixtures::desk_case(tmr, alpha, 168));
      record(s);
      const double v = analysis::lcoh(s.sc).lcoh;
      o.detail << " " << v;
      o.require(v - prev >= -1e-6, "ordering");
      prev = v;
    }
  });

  report(7, "stochastic design robust out of sample, deterministic is not", 120, [](Outcome& o) {
    const auto base = robustness_case();
    const std::vector<std::string> years = {"high", "mid", "lull", "oos_low", "oos_mid"};
    const runs::SolverSettings settings;
    auto stoch = *runs::plan_from_label("S-H", base.policy, years);
    stoch.scenarios = {"high", "mid", "lull"};
    const auto det = *runs::plan_from_label("D1-H", base.policy, years);  // the windiest year

    const auto s_design = runs::run_design(base, stoch, settings);
    const auto d_design = runs::run_design(base, det, settings);
    const auto s_fixed = runs::extract_design(s_design), d_fixed = runs::extract_design(d_design);

    // Hand check of the deficit hour: in hour 10 of oos_low the deterministic
    // design can match at most ppa_mw x 0.02 MW, far below the electrolyzer
    // draw needed to meet 18.4 t/h, and its tank cannot cover one hour.
    const double ppa_mw = d_fixed.new_power.at("ppa_wind");
    const double matched = ppa_mw * 0.02;
    const double tank = d_fixed.h2_storage_tonnes;
    o.require(matched < 999.12 && tank < 18.4, "deficit hour exists by construction");

    runs::RunPlan oos = stoch;
    oos.mode = runs::RunMode::OosDispatch;
    oos.scenarios = {"oos_low", "oos_mid"};
    const auto s_oos = runs::run_oos(base, oos, s_fixed, stoch.scenarios, settings);
    const auto d_oos = runs::run_oos(base, oos, d_fixed, det.scenarios, settings);
    Index s_unmet = 0;
    for (const auto& r : analysis::robustness_metrics(s_oos.combined)) s_unmet += r.unmet_hours;
    const auto d_rob = analysis::robustness_metrics(d_oos.combined);
    o.require(d_rob.size() == 2, "two OOS scenarios");
    const Index d_unmet_low = d_rob.empty() ? 0 : d_rob[0].unmet_hours;
    o.detail << " stochastic unmet hours " << s_unmet << " (tank " << s_fixed.h2_storage_tonnes
             << " t); deterministic unmet hours on oos_low " << d_unmet_low << " (PPA "
             << ppa_mw << " MW, tank " << tank << " t, share "
             << (d_rob.empty() ? 0.0 : d_rob[0].unmatched_share) << ")";
    o.require(s_unmet == 0, "stochastic design needs no slack");
    o.require(d_unmet_low >= 1, "deterministic design misses at least one hour");
  });

  report(9, "deterministic on X equals stochastic on {X}", 0, [](Outcome& o) {
    auto c = fixtures::desk_case(TmrKind::Hourly, 0.9, 72);
    c.technologies.push_back(fixtures::battery("bat", false));
    const auto d = solve(c, {model::Mode::Deterministic});
    const auto s = solve(c, {model::Mode::Stochastic});
    record(d);
    record(s);
    const auto a = runs::extract_design(d.sc), b = runs::extract_design(s.sc);
    double worst = std::abs(a.electrolyzer_mw - b.electrolyzer_mw);
    worst = std::max(worst, std::abs(a.h2_storage_tonnes - b.h2_storage_tonnes));
    for (const auto& [id, v] : a.new_power) worst = std::max(worst, std::abs(v - b.new_power.at(id)));
    for (const auto& [id, v] : a.new_energy) worst = std::max(worst, std::abs(v - b.new_energy.at(id)));
    const double gap = rel(d.sc.solution.objective, s.sc.solution.objective);
    o.detail << " rel objective gap " << gap << ", max capacity gap " << worst << " MW";
    o.require(gap <= 1e-9, "objective");
    o.require(worst <= 1e-6, "capacities");
  });

  report(10, "k-means recovers the 2-partition; fixed seed is stable", 0, [](Outcome& o) {
    scenarios::ScenarioLibrary lib;
    for (int y = 0; y < 6; ++y) {
      WeatherScenario ws;
      ws.year_label = std::to_string(2010 + y);
      Series s = fixtures::wind_profile(48, 60 + y, 0.5) * 0.05;
      s.array() += y < 3 ? 0.2 : 0.7;
      ws.cf_by_group["new-wind"] = s.cwiseMin(1.0);
      lib.years.emplace(ws.year_label, ws);
    }
    const auto first = scenarios::kmeans_reduce(lib, 2, 99);
    // Exhaustive oracle: the best 2-partition of 6 points.
    const auto labels = lib.labels();
    Eigen::MatrixXd x(6, 48);
    for (int i = 0; i < 6; ++i) x.row(i) = lib.years.at(labels[i]).cf_by_group.at("new-wind").transpose();
    double best = std::numeric_limits<double>::infinity();
    int best_mask = 0;
    for (int mask = 1; mask < 63; ++mask) {
      double sse = 0;
      for (int side = 0; side < 2; ++side) {
        Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(48);
        int n = 0;
        for (int i = 0; i < 6; ++i)
          if (((mask >> i) & 1) == side) mean += x.row(i), ++n;
        mean /= n;
        for (int i = 0; i < 6; ++i)
          if (((mask >> i) & 1) == side) sse += (x.row(i) - mean).squaredNorm();
      }
      if (sse < best) best = sse, best_mask = mask;
    }
    bool same = true;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        same = same && ((first.assignment[i] == first.assignment[j]) ==
                        (((best_mask >> i) & 1) == ((best_mask >> j) & 1)));
    o.require(same, "partition equals the exhaustive optimum");
    bool stable = true;
    for (int k = 0; k < 10; ++k)
      stable = stable && scenarios::kmeans_reduce(lib, 2, 99).design_years == first.design_years;
    o.require(stable, "identical design years across reruns");
    o.detail << " design years " << first.design_years[0] << ", " << first.design_years[1];
  });

  report(11, "dual sanity: RPS, annual TMR, 250+ bin", 0, [](Outcome& o) {
    auto c = fixtures::desk_case(TmrKind::Annual, 1, 48);
    c.technologies[1].existing_capacity = 3000;  // grid wind well above a 5% share
    c.policy.rps_kappa = 0.05;
    const auto s = solve(c);
    record(s);
    const auto pr = analysis::price_report(s.sc);
    o.require(pr.rps && std::abs(*pr.rps) <= 1e-9, "nonbinding RPS price is 0");
    o.require(pr.tmr && *pr.tmr >= 0, "binding annual TMR price >= 0");
    Series duals = Series::Zero(8760);
    duals[0] = 300;
    const auto h = analysis::price_histogram(duals);
    o.require(h.counts.front() == 8759 && h.counts.back() == 1 && h.labels().back() == "250+",
              "histogram terminal bin");
    o.detail << " RPS price " << pr.rps.value_or(-1) << ", annual TMR price " << pr.tmr.value_or(-1)
             << " $/MWh, histogram first/last " << h.counts.front() << "/" << h.counts.back();
  });

  report(8, "conservation on every solved fixture", 0, [](Outcome& o) {
    auto c = fixtures::desk_case(TmrKind::Hourly, 1, 48);
    c.technologies.push_back(fixtures::battery("bat", false));
    record(solve(c));
    o.pass = conservation.pass;
    o.detail << " " << conservation_checks << " fixtures checked" << conservation.detail.str();
  });

  // Conservation is checked on the fixtures solved by the other criteria, so it runs last.
  for (const auto& [id, line] : lines) std::puts(line.c_str());
  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
