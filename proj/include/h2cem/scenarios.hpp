#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "h2cem/domain.hpp"

namespace h2cem::scenarios {

/// Group names used throughout: "existing-wind", "new-wind", "existing-solar", "new-solar".
inline const std::vector<std::string> kGroups = {"existing-wind", "new-wind", "existing-solar",
                                                 "new-solar"};

struct PlantRecord {
  std::string id;
  std::string group;
  double capacity = 0;                     ///< MW
  std::map<std::string, Series> generation;  ///< MWh per hour, keyed by year
};

struct AggregateResult {
  std::map<std::string, Series> cf;  ///< by group
  Index clamped = 0;                 ///< hours pulled back into [0, 1]
  bool leap_day_trimmed = false;
};

/// Capacity-weighted capacity factor per group for one year. Plants are
/// summed in id order so the result does not depend on input order.
AggregateResult aggregate_profiles(const std::vector<PlantRecord>& plants, const std::string& year);

struct ScenarioLibrary {
  std::map<std::string, WeatherScenario> years;
  std::vector<std::string> design_years;
  std::vector<std::string> oos_years;

  std::vector<std::string> labels() const;
};

struct KMeansOptions {
  int max_iterations = 300;
  std::string feature_group = "new-wind";
};

struct KMeansResult {
  std::vector<std::string> design_years;  ///< medoid of each cluster, sorted
  std::vector<std::string> years;         ///< library order used for `assignment`
  std::vector<int> assignment;
  Eigen::MatrixXd centroids;              ///< one row per cluster
  std::vector<double> inertia;            ///< within-cluster sum of squares per iteration
  int iterations = 0;
};

/// Lloyd's algorithm from a seeded k-means++ start on the hourly series of
/// `feature_group`. Deterministic for a fixed seed.
KMeansResult kmeans_reduce(const ScenarioLibrary& library, int k, std::uint64_t seed,
                           const KMeansOptions& opts = {});

/// Uniform sample without replacement from the years outside design_years,
/// returned sorted.
std::vector<std::string> sample_oos(const ScenarioLibrary& library, int n, std::uint64_t seed);

/// Long-format generation `year,hour,plant_id,mwh` plus a registry
/// `plant_id,group,capacity_mw`.
std::vector<PlantRecord> read_plants(const std::filesystem::path& registry,
                                     const std::filesystem::path& generation);

/// Aggregates every year present in the plant data.
ScenarioLibrary build_library(const std::vector<PlantRecord>& plants, Index* clamped = nullptr);

/// One CSV per year (`hour,<group>...`) plus selection.csv listing design and OOS years.
void write_library(const ScenarioLibrary& library, const std::filesystem::path& dir);

}  // namespace h2cem::scenarios
