#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "h2cem/io/csv.hpp"
#include "h2cem/scenarios.hpp"

using namespace h2cem;
using namespace h2cem::scenarios;

namespace {

PlantRecord plant(const std::string& id, const std::string& group, double cap,
                  std::map<std::string, Series> gen) {
  return {id, group, cap, std::move(gen)};
}

// Six years in three well separated pairs.
ScenarioLibrary separated_library(Index hours = 24) {
  ScenarioLibrary lib;
  const double levels[] = {0.1, 0.12, 0.5, 0.52, 0.9, 0.88};
  for (int y = 0; y < 6; ++y) {
    WeatherScenario ws;
    ws.year_label = std::to_string(2000 + y);
    Series s = fixtures::wind_profile(hours, 100 + y, 0.5) * 0.02;
    s.array() += levels[y];
    ws.cf_by_group["new-wind"] = s.cwiseMax(0.0).cwiseMin(1.0);
    ws.weight = 1.0 / 6;
    lib.years.emplace(ws.year_label, ws);
  }
  return lib;
}

Eigen::MatrixXd features(const ScenarioLibrary& lib) {
  const auto labels = lib.labels();
  const Index dim = lib.years.begin()->second.cf_by_group.at("new-wind").size();
  Eigen::MatrixXd x(Index(labels.size()), dim);
  for (std::size_t i = 0; i < labels.size(); ++i)
    x.row(Index(i)) = lib.years.at(labels[i]).cf_by_group.at("new-wind").transpose();
  return x;
}

double sse(const Eigen::MatrixXd& x, const std::vector<int>& assign, int k) {
  double total = 0;
  for (int j = 0; j < k; ++j) {
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
    int n = 0;
    for (std::size_t i = 0; i < assign.size(); ++i)
      if (assign[i] == j) mean += x.row(Index(i)), ++n;
    if (n == 0) return std::numeric_limits<double>::infinity();
    mean /= n;
    for (std::size_t i = 0; i < assign.size(); ++i)
      if (assign[i] == j) total += (x.row(Index(i)) - mean).squaredNorm();
  }
  return total;
}

// Brute force over all k^n labelings.
double best_partition_sse(const Eigen::MatrixXd& x, int k) {
  const int n = int(x.rows());
  std::vector<int> a(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, sse(x, a, k));
    int i = 0;
    while (i < n && ++a[i] == k) a[i++] = 0;
    if (i == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("aggregation weights plants by capacity") {
  Series a(3), b(3);
  a << 10, 20, 30;
  b << 40, 0, 50;
  std::vector<PlantRecord> plants = {plant("b", "new-wind", 100, {{"2001", b}}),
                                     plant("a", "new-wind", 50, {{"2001", a}}),
                                     plant("s", "new-solar", 10, {{"2001", Series::Constant(3, 5)}})};
  const auto r = aggregate_profiles(plants, "2001");
  const Series& w = r.cf.at("new-wind");
  CHECK(w[0] == doctest::Approx(50.0 / 150));
  CHECK(w[1] == doctest::Approx(20.0 / 150));
  CHECK(w[2] == doctest::Approx(80.0 / 150));
  CHECK(r.cf.at("new-solar")[0] == doctest::Approx(0.5));
  CHECK(r.clamped == 0);

  // Input order does not matter, bit for bit.
  std::reverse(plants.begin(), plants.end());
  const auto r2 = aggregate_profiles(plants, "2001");
  CHECK((r2.cf.at("new-wind").array() == w.array()).all());
}

TEST_CASE("aggregation clamps and trims") {
  Series g = Series::Constant(8784, 5);
  g[0] = 20;
  const auto r = aggregate_profiles({plant("p", "existing-wind", 10, {{"2004", g}})}, "2004");
  CHECK(r.leap_day_trimmed);
  CHECK(r.cf.at("existing-wind").size() == 8760);
  CHECK(r.cf.at("existing-wind")[0] == 1.0);
  CHECK(r.clamped == 1);
  CHECK_THROWS_AS(aggregate_profiles({plant("p", "g", 10, {{"2004", g}})}, "1999"),
                  std::invalid_argument);
  CHECK_THROWS_AS(aggregate_profiles({plant("p", "g", 0, {{"2004", g}})}, "2004"),
                  std::invalid_argument);
}

TEST_CASE("k-means reaches the exhaustive optimum on separated data") {
  const auto lib = separated_library();
  const auto x = features(lib);
  const double oracle = best_partition_sse(x, 3);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    const auto res = kmeans_reduce(lib, 3, seed);
    CHECK(sse(x, res.assignment, 3) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(res.inertia.back() == doctest::Approx(oracle).epsilon(1e-9));
    // One medoid from each pair.
    std::set<int> pairs;
    for (const auto& y : res.design_years) pairs.insert((std::stoi(y) - 2000) / 2);
    CHECK(pairs.size() == 3);
  }
  CHECK(kmeans_reduce(lib, 1, 0).inertia.back() == doctest::Approx(best_partition_sse(x, 1)));
}

TEST_CASE("k-means ends at a Lloyd fixed point") {
  const auto lib = separated_library();
  const auto x = features(lib);
  for (int k = 1; k <= 6; ++k) {
    const auto res = kmeans_reduce(lib, k, 11);
    CHECK(res.design_years.size() == std::size_t(k));
    for (Index i = 0; i < x.rows(); ++i) {
      Index nearest;
      (res.centroids.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&nearest);
      CHECK(res.assignment[std::size_t(i)] == int(nearest));
    }
  }
}

TEST_CASE("k-means inertia never increases and runs are seed-deterministic") {
  ScenarioLibrary lib;
  for (int y = 0; y < 12; ++y) {
    WeatherScenario ws;
    ws.year_label = std::to_string(1990 + y);
    ws.cf_by_group["new-wind"] = fixtures::wind_profile(48, 500 + y, 0.3 + 0.02 * y);
    lib.years.emplace(ws.year_label, ws);
  }
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto seed = rng();
    const int k = 1 + int(seed % 6);
    const auto a = kmeans_reduce(lib, k, seed), b = kmeans_reduce(lib, k, seed);
    CHECK(a.design_years == b.design_years);
    CHECK(a.assignment == b.assignment);
    for (std::size_t i = 1; i < a.inertia.size(); ++i) CHECK(a.inertia[i] <= a.inertia[i - 1] + 1e-12);
    // Each medoid belongs to the library and is unique.
    CHECK(std::set<std::string>(a.design_years.begin(), a.design_years.end()).size() ==
          a.design_years.size());
  }
  CHECK_THROWS_AS(kmeans_reduce(lib, 13, 1), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_reduce(lib, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_reduce(lib, 2, 1, {300, "new-solar"}), std::invalid_argument);
}

TEST_CASE("out-of-sample years avoid the design set") {
  auto lib = separated_library();
  lib.design_years = {"2000", "2002", "2004"};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto oos = sample_oos(lib, 2, seed);
    CHECK(oos.size() == 2);
    CHECK(std::is_sorted(oos.begin(), oos.end()));
    for (const auto& y : oos) CHECK(std::stoi(y) % 2 == 1);
    CHECK(oos == sample_oos(lib, 2, seed));
  }
  CHECK(sample_oos(lib, 3, 1) == std::vector<std::string>{"2001", "2003", "2005"});
  CHECK_THROWS_AS(sample_oos(lib, 4, 1), std::invalid_argument);
}

TEST_CASE("plant files to a written library") {
  const auto dir = std::filesystem::temp_directory_path() / "h2cem_ingest_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream reg(dir / "registry.csv");
    reg << "plant_id,group,capacity_mw\nw1,new-wind,10\nw2,new-wind,30\n";
    std::ofstream gen(dir / "generation.csv");
    gen << "year,hour,plant_id,mwh\n";
    for (const char* y : {"2001", "2002"})
      for (int h = 1; h <= 4; ++h) {
        gen << y << "," << h << ",w1," << h << "\n";
        gen << y << "," << h << ",w2," << 3 * h << "\n";
      }
  }
  const auto plants = read_plants(dir / "registry.csv", dir / "generation.csv");
  REQUIRE(plants.size() == 2);
  auto lib = build_library(plants);
  REQUIRE(lib.years.size() == 2);
  CHECK(lib.years.at("2001").cf_by_group.at("new-wind")[3] == doctest::Approx(0.4));
  lib.design_years = {"2001"};
  lib.oos_years = {"2002"};
  write_library(lib, dir / "out");
  CHECK(std::filesystem::exists(dir / "out" / "cf_2002.csv"));
  std::ifstream sel(dir / "out" / "selection.csv");
  std::string all((std::istreambuf_iterator<char>(sel)), {});
  CHECK(all == "year,role\n2001,design\n2002,oos\n");

  std::ofstream(dir / "bad.csv") << "year,hour,plant_id,mwh\n2001,2,w1,1\n";
  CHECK_THROWS_AS(read_plants(dir / "registry.csv", dir / "bad.csv"), io::IoError);
  std::filesystem::remove_all(dir);
}
