#include "doctest.h"

#include "fixtures.hpp"
#include "h2cem/lp/dual_series.hpp"
#include "h2cem/model/assemble.hpp"

using namespace h2cem;
using model::indexed;

namespace {

struct Solved {
  model::AssembledModel m;
  lp::Solution<double> sol;
};

Solved solve_case(const SystemCase& c, model::AssembleOptions opts = {}) {
  Solved out{model::assemble(c, opts), {}};
  out.sol = lp::solve(out.m.lp);
  REQUIRE(out.sol.optimal());
  return out;
}

double coefficient(const lp::LinearProgramd& lp, const std::string& row, lp::Index col) {
  const auto i = lp.find_constraint(row);
  REQUIRE(i);
  for (const auto& t : lp.constraint(*i).terms)
    if (t.column == col) return t.coefficient;
  return 0;
}

std::size_t count_prefix(const std::vector<std::string>& names, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& s : names) n += s.rfind(prefix, 0) == 0;
  return n;
}

SystemCase flat_h2_case(Index hours) {
  auto c = fixtures::desk_case(TmrKind::None, 1.0, hours);
  c.technologies.resize(1);  // NGCC only
  c.demand.grid_load.setConstant(1000);
  return c;
}

}  // namespace

TEST_CASE("electrolyzer sized for 18.4 t/h draws 999.12 MW") {
  const auto c = flat_h2_case(4);
  auto r = solve_case(c);
  const auto& v = r.m.vars;
  CHECK(coefficient(r.m.lp, "power_balance[0,0]", v.h2_gen(0, 0)) == doctest::Approx(-54.3));
  CHECK(r.sol.primal[v.electrolyzer_cap] == doctest::Approx(999.12).epsilon(1e-9));
  for (Index t = 0; t < 4; ++t) CHECK(r.sol.primal[v.h2_gen(0, t)] == doctest::Approx(18.4));
}

TEST_CASE("capacity reserve: 93 MW firm against a 79.625 MW requirement") {
  const auto c = fixtures::thermal_only(1, 70, 100);
  auto c2 = c;
  c2.technologies[0].crm_derate = 0.93;
  auto r = solve_case(c2);
  const auto i = *r.m.lp.find_constraint("crm[0,0]");
  // Existing firm capacity (93 MW) is a constant folded into the right-hand side.
  CHECK(r.m.lp.constraint(i).rhs == doctest::Approx(79.625 - 93));
  CHECK(r.sol.row_activity[i] - r.m.lp.constraint(i).rhs == doctest::Approx(13.375));
  CHECK(r.sol.dual[i] == doctest::Approx(0));
  CHECK(coefficient(r.m.lp, "crm[0,0]", r.m.vars.nse_power(0, 0)) == doctest::Approx(1.1375));
}

TEST_CASE("binding capacity reserve prices new firm capacity") {
  // 70 MW of load, 60 MW existing firm: the reserve buys new capacity.
  auto c = fixtures::thermal_only(1, 70, 60);
  c.technologies[0].crm_derate = 1;
  c.technologies[0].expandable = true;
  auto r = solve_case(c);
  const double installed = 60 + r.sol.primal[r.m.vars.tech[0].cap_new];
  CHECK(installed == doctest::Approx(79.625));
  CHECK(r.sol.dual_value("crm[0,0]") ==
        doctest::Approx(c.technologies[0].inv_cost_power_annualized + c.technologies[0].fom_power));
}

TEST_CASE("RPS shortfall of 5 MWh costs 5000 per modeled MWh-weight") {
  auto c = fixtures::thermal_only(1, 10, 20);
  const double base = solve_case(c).sol.objective;
  c.policy.rps_kappa = 0.5;
  auto r = solve_case(c);
  CHECK(r.sol.primal[r.m.vars.rps_slack[0]] == doctest::Approx(5));
  CHECK(r.sol.objective - base == doctest::Approx(5000 * c.hour_weight()));
  CHECK(r.sol.dual_value("rps[0]") == doctest::Approx(1000 * c.hour_weight()));
}

TEST_CASE("nonbinding RPS has a zero price") {
  auto c = fixtures::desk_case(TmrKind::None, 1, 24);
  c.policy.rps_kappa = 0.0;
  auto r = solve_case(c);
  CHECK(r.sol.dual_value("rps[0]") == doctest::Approx(0));
}

TEST_CASE("a forced start costs start cost plus start fuel per MW") {
  // Load 0 then 100 MW with a 30% minimum stable level: the unit must
  // decommit in hour 0 and start 100 MW in hour 1.
  auto c = fixtures::thermal_only(2, 0, 200);
  auto& g = c.technologies[0];
  g = fixtures::ngcc("gas");
  g.expandable = false;
  g.existing_capacity = 200;
  g.max_availability = 1;
  c.demand.grid_load << 0, 100;
  auto r = solve_case(c);
  const auto& tv = r.m.vars.tech[0];
  CHECK(r.sol.primal[tv.start(0, 1)] == doctest::Approx(100));
  CHECK(r.sol.primal[tv.shut(0, 0)] == doctest::Approx(100));
  const double per_mw_start = (64703 + 1454 * 2.03) / 500.0;
  const double energy = 2 + 2.03 * 6.36;
  const double w = c.hour_weight();
  CHECK(model::start_cost_per_mw(c, g) == doctest::Approx(per_mw_start));
  CHECK(r.sol.objective ==
        doctest::Approx(200 * 13513 + w * (100 * per_mw_start + 100 * energy)).epsilon(1e-9));
}

TEST_CASE("battery arbitrage respects round-trip losses") {
  // Free charging energy in hour 0 (curtailed wind), gas at ~15 $/MWh in hour 1.
  auto c = fixtures::thermal_only(2, 50, 100);
  c.technologies[0].max_availability = 1;
  auto b = fixtures::battery("bat", false);
  b.expandable = false;
  b.existing_capacity = 10;
  b.existing_energy = 40;
  b.self_discharge = 0;
  c.technologies.push_back(b);
  auto w = fixtures::wind("wind", false);
  w.expandable = false;
  w.existing_capacity = 100;
  c.technologies.push_back(w);
  c.scenarios[0].cf_by_group["wind"] = Series(2);
  c.scenarios[0].cf_by_group["wind"] << 0.6, 0.0;
  auto r = solve_case(c);
  const auto& tv = r.m.vars.tech[1];
  const double charge = r.sol.primal[tv.charge(0, 0)];
  const double discharge = r.sol.primal[tv.discharge(0, 1)];
  CHECK(charge == doctest::Approx(10));
  CHECK(discharge == doctest::Approx(10 * 0.92 * 0.92));
  const double soc0 = r.sol.primal[tv.soc(0, 0)], soc1 = r.sol.primal[tv.soc(0, 1)];
  CHECK(soc0 - soc1 == doctest::Approx(0.92 * charge));
}

TEST_CASE("family cardinalities") {
  auto c = fixtures::desk_case(TmrKind::Hourly, 0.9, 12);
  c.scenarios.push_back(fixtures::scenario("w1", fixtures::wind_profile(12, 3), 0.5));
  c.scenarios[0].weight = 0.5;
  c.policy.rps_kappa = 0.1;
  const auto m = model::assemble(c, {model::Mode::Stochastic, std::nullopt, true});
  const auto& rows = m.lp.names().constraints;
  const auto& cols = m.lp.names().variables;
  CHECK(count_prefix(rows, "power_balance[") == 24);
  CHECK(count_prefix(rows, "h2_balance[") == 24);
  CHECK(count_prefix(rows, "crm[") == 24);
  CHECK(count_prefix(rows, "tmr_hourly[") == 24);
  CHECK(count_prefix(rows, "excess_cap[") == 2);
  CHECK(count_prefix(rows, "rps[") == 2);
  CHECK(count_prefix(rows, "tmr_annual[") == 0);
  CHECK(count_prefix(cols, "gen_ngcc[") == 24);
  CHECK(count_prefix(cols, "tmr_slack[") == 24);
  CHECK(count_prefix(cols, "cap_new_ngcc") == 1);
  CHECK(count_prefix(cols, "ely_cap") == 1);
  CHECK(m.lp.check().empty());
}

TEST_CASE("annual matching is one equality per scenario") {
  const auto c = fixtures::desk_case(TmrKind::Annual, 1, 12);
  const auto m = model::assemble(c, {});
  const auto i = m.lp.find_constraint("tmr_annual[0]");
  REQUIRE(i);
  CHECK(m.lp.constraint(*i).sense == lp::Sense::Equal);
  CHECK(count_prefix(m.lp.names().constraints, "tmr_hourly[") == 0);
  CHECK_THROWS_AS(model::assemble(c, {model::Mode::Deterministic, std::nullopt, true}),
                  model::BuildError);
}

TEST_CASE("assembly errors name the builder") {
  auto c = fixtures::desk_case(TmrKind::None, 1, 6);
  c.scenarios.push_back(fixtures::scenario("w1", fixtures::wind_profile(6, 1), 0.5));
  c.scenarios[0].weight = 0.5;
  try {
    model::assemble(c, {model::Mode::Deterministic});
    FAIL("expected a BuildError");
  } catch (const model::BuildError& e) {
    CHECK(e.builder() == "objective");
  }
  CHECK_THROWS_AS(model::assemble(c, {model::Mode::OutOfSample}), model::BuildError);
  c.scenarios[0].weight = 0.2;
  CHECK_THROWS_AS(model::assemble(c, {model::Mode::Stochastic}), model::BuildError);
}

TEST_CASE("objective is monotone in matching stringency") {
  const Index hours = 48;
  double prev = -1;
  const std::pair<TmrKind, double> grid[] = {{TmrKind::None, 1},   {TmrKind::Annual, 1},
                                             {TmrKind::Hourly, .8}, {TmrKind::Hourly, .9},
                                             {TmrKind::Hourly, 1}};
  for (const auto& [tmr, alpha] : grid) {
    const double obj = solve_case(fixtures::desk_case(tmr, alpha, hours)).sol.objective;
    CHECK(obj >= prev - 1e-6 * std::abs(obj));
    prev = obj;
  }
}

TEST_CASE("fixed first stage pins capacities through bounds") {
  const auto c = fixtures::desk_case(TmrKind::Hourly, 1, 12);
  auto design = solve_case(c);
  model::FirstStageValues fixed;
  const auto& v = design.m.vars;
  for (std::size_t k = 0; k < c.technologies.size(); ++k)
    fixed.new_power[c.technologies[k].id] = design.sol.primal[v.tech[k].cap_new];
  fixed.electrolyzer_mw = design.sol.primal[v.electrolyzer_cap];
  fixed.h2_storage_tonnes = design.sol.primal[v.h2_storage_cap];
  fixed.compressor_tph = design.sol.primal[v.compressor_cap];
  auto oos = solve_case(c, {model::Mode::OutOfSample, fixed, true});
  const auto& w = oos.m.vars;
  CHECK(oos.sol.primal[w.electrolyzer_cap] == fixed.electrolyzer_mw);
  for (std::size_t k = 0; k < c.technologies.size(); ++k)
    CHECK(oos.sol.primal[w.tech[k].cap_new] == fixed.new_power[c.technologies[k].id]);
  // Same weather: the design is feasible without slack.
  CHECK(oos.sol.primal.segment(w.tmr_slack(0, 0), 12).sum() == doctest::Approx(0).epsilon(1e-9));
  CHECK(oos.sol.objective == doctest::Approx(design.sol.objective).epsilon(1e-9));
}

TEST_CASE("strong duality on an assembled case") {
  auto r = solve_case(fixtures::desk_case(TmrKind::Hourly, 0.9, 24));
  CHECK(std::abs(r.sol.objective - r.sol.dual_objective) <= 1e-7 * (1 + std::abs(r.sol.objective)));
}

TEST_CASE("cost conversions") {
  H2ProjectSpec h;
  CHECK(model::per_mw_electric(54.3, h) == doctest::Approx(h.h2_lhv));
  CHECK(model::per_tonne_hour(1.0, h) == doctest::Approx(h.h2_lhv));
  const auto c = fixtures::desk_case();
  CHECK(model::marginal_energy_cost(c, c.technologies[0]) == doctest::Approx(2 + 2.03 * 6.36));
}
