#include "h2cem/scenarios.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "h2cem/io/csv.hpp"

namespace h2cem::scenarios {

std::vector<std::string> ScenarioLibrary::labels() const {
  std::vector<std::string> out;
  for (const auto& [label, _] : years) out.push_back(label);
  return out;
}

AggregateResult aggregate_profiles(const std::vector<PlantRecord>& plants, const std::string& year) {
  std::vector<const PlantRecord*> sorted;
  for (const auto& p : plants) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const PlantRecord* a, const PlantRecord* b) { return a->id < b->id; });

  AggregateResult out;
  std::map<std::string, Series> generation;
  std::map<std::string, double> capacity;
  for (const PlantRecord* p : sorted) {
    if (!(p->capacity > 0)) throw std::invalid_argument("plant " + p->id + ": capacity must be > 0");
    auto it = p->generation.find(year);
    if (it == p->generation.end())
      throw std::invalid_argument("plant " + p->id + " has no generation for year " + year);
    Series g = it->second;
    if (g.size() == io::kLeapYearHours) {
      g = io::trim_leap_day(g);
      out.leap_day_trimmed = true;
    }
    auto& acc = generation[p->group];
    if (acc.size() == 0) acc = Series::Zero(g.size());
    if (acc.size() != g.size())
      throw std::invalid_argument("plant " + p->id + ": series length differs within group " +
                                  p->group);
    acc += g;
    capacity[p->group] += p->capacity;
  }
  for (auto& [group, g] : generation) {
    const double cap = capacity[group];
    if (!(cap > 0)) throw std::invalid_argument("group " + group + ": zero total capacity");
    Series cf = g / cap;
    for (Index t = 0; t < cf.size(); ++t) {
      if (cf[t] > 1) {
        cf[t] = 1;
        ++out.clamped;
      } else if (cf[t] < 0) {
        cf[t] = 0;
        ++out.clamped;
      }
    }
    out.cf[group] = std::move(cf);
  }
  return out;
}

namespace {

double sq_dist(const Eigen::MatrixXd& x, Index i, const Eigen::MatrixXd& c, Index j) {
  return (x.row(i) - c.row(j)).squaredNorm();
}

}  // namespace

KMeansResult kmeans_reduce(const ScenarioLibrary& library, int k, std::uint64_t seed,
                           const KMeansOptions& opts) {
  if (library.years.empty()) throw std::invalid_argument("kmeans_reduce: empty library");
  const int n = static_cast<int>(library.years.size());
  if (k <= 0) throw std::invalid_argument("kmeans_reduce: k must be positive");
  if (k > n) throw std::invalid_argument("kmeans_reduce: k exceeds the number of years");

  KMeansResult res;
  res.years = library.labels();
  Index dim = -1;
  for (const auto& label : res.years) {
    const auto& groups = library.years.at(label).cf_by_group;
    auto it = groups.find(opts.feature_group);
    if (it == groups.end())
      throw std::invalid_argument("kmeans_reduce: year " + label + " has no " + opts.feature_group +
                                  " series");
    if (dim < 0) dim = it->second.size();
    if (it->second.size() != dim)
      throw std::invalid_argument("kmeans_reduce: feature lengths differ");
  }
  Eigen::MatrixXd x(n, dim);
  for (int i = 0; i < n; ++i)
    x.row(i) = library.years.at(res.years[i]).cf_by_group.at(opts.feature_group).transpose();

  // k-means++ seeding.
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd c(k, dim);
  std::vector<int> chosen{std::uniform_int_distribution<int>(0, n - 1)(rng)};
  c.row(0) = x.row(chosen[0]);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int j = 1; j < k; ++j) {
    double total = 0;
    for (int i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(x, i, c, j - 1));
      total += d2[i];
    }
    int pick = -1;
    if (total > 0) {
      double r = std::uniform_real_distribution<double>(0, total)(rng);
      for (int i = 0; i < n; ++i) {
        if (d2[i] <= 0) continue;
        pick = i;
        r -= d2[i];
        if (r < 0) break;
      }
    }
    if (pick < 0) {
      // All points coincide with existing centers; take the first unused year.
      for (int i = 0; i < n && pick < 0; ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pick = i;
    }
    chosen.push_back(pick);
    c.row(j) = x.row(pick);
  }

  std::vector<int> assign(n, -1);
  for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
    bool changed = false;
    double inertia = 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(x, i, c, 0);
      for (int j = 1; j < k; ++j) {
        const double d = sq_dist(x, i, c, j);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      changed = changed || assign[i] != best;
      assign[i] = best;
      inertia += best_d;
    }
    res.inertia.push_back(inertia);
    if (!changed) break;
    for (int j = 0; j < k; ++j) {
      Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(dim);
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (assign[i] == j) {
          sum += x.row(i);
          ++count;
        }
      if (count > 0) c.row(j) = sum / double(count);
    }
  }
  res.assignment = assign;
  res.centroids = c;

  for (int j = 0; j < k; ++j) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (assign[i] != j) continue;
      const double d = sq_dist(x, i, c, j);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best >= 0) res.design_years.push_back(res.years[best]);
  }
  std::sort(res.design_years.begin(), res.design_years.end());
  return res;
}

std::vector<std::string> sample_oos(const ScenarioLibrary& library, int n, std::uint64_t seed) {
  const std::set<std::string> design(library.design_years.begin(), library.design_years.end());
  std::vector<std::string> pool;
  for (const auto& [label, _] : library.years)
    if (!design.count(label)) pool.push_back(label);
  if (n < 0 || n > static_cast<int>(pool.size()))
    throw std::invalid_argument("sample_oos: asked for " + std::to_string(n) + " years, only " +
                                std::to_string(pool.size()) + " outside the design set");
  std::vector<std::string> out;
  std::mt19937_64 rng(seed);
  std::sample(pool.begin(), pool.end(), std::back_inserter(out), n, rng);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PlantRecord> read_plants(const std::filesystem::path& registry,
                                     const std::filesystem::path& generation) {
  const auto reg = io::read_csv_rows(registry);
  const std::size_t c_id = reg.column("plant_id"), c_group = reg.column("group"),
                    c_cap = reg.column("capacity_mw");
  std::map<std::string, PlantRecord> plants;
  for (const auto& row : reg.rows) {
    PlantRecord p;
    p.id = row[c_id];
    p.group = row[c_group];
    p.capacity = io::parse_number(row[c_cap], registry.string() + " plant " + p.id);
    if (!plants.emplace(p.id, p).second)
      throw io::IoError(registry.string() + ": duplicate plant " + p.id);
  }

  const auto gen = io::read_csv_rows(generation);
  const std::size_t g_year = gen.column("year"), g_hour = gen.column("hour"),
                    g_id = gen.column("plant_id"), g_mwh = gen.column("mwh");
  std::map<std::pair<std::string, std::string>, std::vector<double>> series;
  for (const auto& row : gen.rows) {
    const std::string& id = row[g_id];
    if (!plants.count(id)) throw io::IoError(generation.string() + ": unregistered plant " + id);
    auto& s = series[{id, row[g_year]}];
    const double hour = io::parse_number(row[g_hour], generation.string());
    if (hour != double(s.size() + 1))
      throw io::IoError(generation.string() + ": plant " + id + " year " + row[g_year] +
                        " hours must run 1, 2, ... in order");
    s.push_back(io::parse_number(row[g_mwh], generation.string()));
  }
  for (auto& [key, values] : series)
    plants[key.first].generation[key.second] =
        Eigen::Map<const Series>(values.data(), Index(values.size()));
  std::vector<PlantRecord> out;
  for (auto& [_, p] : plants) out.push_back(std::move(p));
  return out;
}

ScenarioLibrary build_library(const std::vector<PlantRecord>& plants, Index* clamped) {
  std::set<std::string> years;
  for (const auto& p : plants)
    for (const auto& [y, _] : p.generation) years.insert(y);
  ScenarioLibrary lib;
  Index total_clamped = 0;
  for (const auto& y : years) {
    auto agg = aggregate_profiles(plants, y);
    total_clamped += agg.clamped;
    WeatherScenario ws;
    ws.year_label = y;
    ws.cf_by_group = std::move(agg.cf);
    ws.weight = 1.0 / double(years.size());
    lib.years.emplace(y, std::move(ws));
  }
  if (clamped) *clamped = total_clamped;
  return lib;
}

void write_library(const ScenarioLibrary& library, const std::filesystem::path& dir) {
  for (const auto& [label, ws] : library.years) {
    std::ostringstream out;
    out << "hour";
    for (const auto& [group, _] : ws.cf_by_group) out << "," << group;
    out << "\n";
    const Index hours = ws.cf_by_group.empty() ? 0 : ws.cf_by_group.begin()->second.size();
    for (Index t = 0; t < hours; ++t) {
      out << (t + 1);
      for (const auto& [_, s] : ws.cf_by_group) out << "," << io::format_double(s[t]);
      out << "\n";
    }
    io::write_file_atomic(dir / ("cf_" + label + ".csv"), out.str());
  }
  std::ostringstream sel;
  sel << "year,role\n";
  for (const auto& y : library.design_years) sel << y << ",design\n";
  for (const auto& y : library.oos_years) sel << y << ",oos\n";
  io::write_file_atomic(dir / "selection.csv", sel.str());
}

}  // namespace h2cem::scenarios
