#include "doctest.h"

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "h2cem/domain.hpp"

using namespace h2cem;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("annualized H2 asset costs") {
  CHECK(annuitize(1937791.0, 20.0, 0.04) == doctest::Approx(142586).epsilon(0.005));
  CHECK(annuitize(2451496.0, 15.0, 0.04) == doctest::Approx(220490).epsilon(0.005));
  CHECK(annuitize(587000.0, 30.0, 0.04) == doctest::Approx(33929).epsilon(0.005));
}

TEST_CASE("annuitize edge cases") {
  CHECK(annuitize(1000.0, 1.0, 0.0) == 1000.0);
  CHECK(annuitize(1000.0, 4.0, 0.0) == 250.0);
  // One year at rate r repays capex (1 + r).
  CHECK(annuitize(1000.0, 1.0, 0.05) == doctest::Approx(1050));
  CHECK_THROWS_AS(annuitize(1000.0, 0.5, 0.04), std::invalid_argument);
  CHECK_THROWS_AS(annuitize(1000.0, 10.0, -0.01), std::invalid_argument);
  CHECK_THROWS_AS(annuitize(std::nan(""), 10.0, 0.04), std::invalid_argument);
  CHECK_THROWS_AS(annuitize(1000.0, std::numeric_limits<double>::infinity(), 0.04),
                  std::invalid_argument);
}

TEST_CASE("annuitize monotonicity on random samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> capex(1e3, 1e7), life(1, 60), rate(0, 0.2), bump(1.01, 2);
  for (int i = 0; i < 500; ++i) {
    const double c = capex(rng), l = life(rng), r = rate(rng), b = bump(rng);
    CHECK(annuitize(c * b, l, r) > annuitize(c, l, r));
    CHECK(annuitize(c, l * b, r) < annuitize(c, l, r));
    CHECK(annuitize(c, l, r + 0.01 * b) > annuitize(c, l, r));
  }
}

TEST_CASE("annuitize works on other scalar types") {
  CHECK(annuitize(587000.0f, 30.0f, 0.04f) == doctest::Approx(33929).epsilon(0.005));
  CHECK(annuitize<long double>(587000, 30, 0.04) == doctest::Approx(33929).epsilon(0.005));
}

TEST_CASE("electrolyzer draw for the project size") {
  H2ProjectSpec h;
  CHECK(electrolyzer_draw(18.4, h) == doctest::Approx(999.12).epsilon(1e-12));
  CHECK(std::abs(electrolyzer_draw(18.4, h) - 999.12) <= 1e-6);
  CHECK(storage_limit_from_hours(24, 18.4) == doctest::Approx(441.6));
}

TEST_CASE("well-formed cases validate cleanly") {
  CHECK(validate_case(fixtures::desk_case()).empty());
  CHECK(validate_case(fixtures::desk_case(TmrKind::Annual)).empty());
  CHECK(validate_case(fixtures::desk_case(TmrKind::Hourly, 0.9)).empty());
  CHECK(validate_case(fixtures::thermal_only(24, 100, 200)).empty());
}

TEST_CASE("validation reports each broken rule") {
  SUBCASE("weights summing to 0.9") {
    auto c = fixtures::desk_case();
    c.scenarios[0].weight = 0.9;
    const auto v = validate_case(c);
    REQUIRE(v.size() == 1);
    CHECK(mentions(v, "weights sum"));
  }
  SUBCASE("PPA and RPS on one resource") {
    auto c = fixtures::desk_case();
    c.technologies[2].is_rps_eligible = true;
    const auto v = validate_case(c);
    REQUIRE(v.size() == 1);
    CHECK(mentions(v, "double counted"));
  }
  SUBCASE("beta without hourly matching") {
    auto c = fixtures::desk_case(TmrKind::Annual);
    c.policy.excess_sales_beta = 0.2;
    CHECK(mentions(validate_case(c), "policy.excess_sales_beta"));
  }
  SUBCASE("matching without an H2 project") {
    auto c = fixtures::desk_case(TmrKind::Annual);
    c.h2_project.reset();
    c.demand.h2_demand.setZero();
    CHECK(mentions(validate_case(c), "policy.tmr"));
  }
  SUBCASE("rps share out of range") {
    auto c = fixtures::desk_case();
    c.policy.rps_kappa = 1.5;
    CHECK(mentions(validate_case(c), "policy.rps_kappa"));
  }
  SUBCASE("missing capacity-factor group") {
    auto c = fixtures::desk_case();
    c.scenarios[0].cf_by_group.clear();
    CHECK(mentions(validate_case(c), "scenarios[w0].cf.wind"));
  }
  SUBCASE("series length mismatch") {
    auto c = fixtures::desk_case();
    c.scenarios[0].cf_by_group["wind"] = Series::Constant(10, 0.3);
    CHECK(mentions(validate_case(c), "differs from demand length"));
  }
  SUBCASE("ids that would not survive LP files") {
    auto c = fixtures::desk_case();
    c.technologies[0].id = "ng cc";
    CHECK(mentions(validate_case(c), ".id"));
  }
  SUBCASE("duration bounds") {
    auto c = fixtures::desk_case();
    c.technologies.push_back(fixtures::battery("bat", false));
    c.technologies.back().duration_min = 13;
    CHECK(mentions(validate_case(c), "duration_min"));
  }
}

TEST_CASE("validate_case is pure") {
  auto c = fixtures::desk_case();
  c.policy.rps_kappa = 2;
  c.scenarios[0].weight = 0.5;
  CHECK(validate_case(c) == validate_case(c));
}

TEST_CASE("hour weight scales a short horizon to a year") {
  auto c = fixtures::desk_case();
  CHECK(c.hour_weight() == doctest::Approx(8760.0 / 168));
  CHECK(fixtures::thermal_only(8760, 1, 1).hour_weight() == 1.0);
}
