#pragma once

#include <cstdint>

#include "h2cem/domain.hpp"

// Small hand-built systems shared by the test binaries.
namespace fixtures {

using h2cem::Index;
using h2cem::Series;

Series constant(Index hours, double value);
/// Diurnal wind shape with a multi-day swing and seeded noise, in [0.02, 0.95].
Series wind_profile(Index hours, std::uint64_t seed, double mean = 0.4);

h2cem::FuelSpec natural_gas();
h2cem::TechnologySpec ngcc(const std::string& id = "ngcc");
h2cem::TechnologySpec ngct(const std::string& id = "ngct");
h2cem::TechnologySpec wind(const std::string& id, bool ppa);
h2cem::TechnologySpec battery(const std::string& id, bool ppa);

/// One scenario, no h2 project, flat load, one fixed thermal unit.
h2cem::SystemCase thermal_only(Index hours, double load, double capacity);

/// 168-hour three-resource case: new-build NGCC, grid wind and PPA wind,
/// 2 GW average grid load and an 18.4 tH2/h project.
h2cem::SystemCase desk_case(h2cem::TmrKind tmr = h2cem::TmrKind::None, double alpha = 1.0,
                            Index hours = 168);

/// Scenario with one "wind" cf series.
h2cem::WeatherScenario scenario(const std::string& label, Series wind_cf, double weight = 1.0);

}  // namespace fixtures
