#include "h2cem/report/compare.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "h2cem/io/csv.hpp"
#include "h2cem/report/svg.hpp"
#include "json.hpp"

namespace h2cem::report {

std::vector<RunRecord> collect_runs(const std::filesystem::path& output_dir) {
  if (!std::filesystem::is_directory(output_dir))
    throw io::IoError(output_dir.string() + ": not a directory");
  std::vector<RunRecord> out;
  for (const auto& entry : std::filesystem::directory_iterator(output_dir)) {
    if (!entry.is_directory()) continue;
    RunRecord r;
    r.label = entry.path().filename().string();
    if (r.label == "report") continue;  // our own output
    const auto path = entry.path() / "report.json";
    if (!std::filesystem::exists(path)) {
      r.note = "report.json missing";
    } else {
      try {
        const std::string text = io::read_file(path);
        const auto j = nlohmann::json::parse(text);
        r.hash = j.value("config_hash", "");
        r.seed = j.value("seed", std::uint64_t{0});
        r.report = analysis::report_from_json(text);
        if (r.report->status == "optimal") r.state = RunState::Complete;
        else r.note = "solver status " + r.report->status;
      } catch (const std::exception& e) {
        r.note = std::string("unreadable report.json: ") + e.what();
      }
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.label < b.label; });
  return out;
}

namespace {

std::string fmt(double v) { return io::format_double(std::abs(v) < 1e-300 ? 0.0 : v); }

std::string provenance(const std::vector<RunRecord>& runs) {
  std::set<std::string> hashes;
  std::set<std::uint64_t> seeds;
  for (const auto& r : runs) {
    if (!r.hash.empty()) hashes.insert(r.hash);
    if (r.state == RunState::Complete) seeds.insert(r.seed);
  }
  auto join = [](const auto& set) {
    std::ostringstream s;
    bool first = true;
    for (const auto& v : set) {
      s << (first ? "" : ";") << v;
      first = false;
    }
    return s.str();
  };
  return "# config_hash=" + join(hashes) + " seed=" + join(seeds) + "\n";
}

// metric rows x run columns; partial runs show "partial" in every cell.
class Table {
 public:
  explicit Table(const std::vector<RunRecord>& runs) : runs_(runs) {}

  template <typename F>
  void row(const std::string& metric, F value) {
    rows_.push_back(metric);
    std::vector<std::string> cells;
    for (const auto& r : runs_) {
      if (r.state != RunState::Complete) cells.push_back("partial");
      else cells.push_back(value(*r.report));
    }
    cells_.push_back(std::move(cells));
  }

  void add_column(const std::string& name, std::vector<std::string> cells) {
    extra_names_.push_back(name);
    extra_.push_back(std::move(cells));
  }

  std::string str(const std::string& head) const {
    std::ostringstream out;
    out << head << "metric";
    for (const auto& r : runs_) out << ',' << r.label;
    for (const auto& n : extra_names_) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      out << rows_[i];
      for (const auto& c : cells_[i]) out << ',' << c;
      for (const auto& col : extra_) out << ',' << col[i];
      out << '\n';
    }
    return out.str();
  }

 private:
  const std::vector<RunRecord>& runs_;
  std::vector<std::string> rows_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<std::string> extra_names_;
  std::vector<std::vector<std::string>> extra_;
};

using Lcoh = analysis::LcohBreakdown;

struct LcohRow {
  const char* name;
  double (*get)(const Lcoh&);
};

const LcohRow kLcohRows[] = {
    {"lcoh_usd_per_kg", [](const Lcoh& b) { return b.lcoh; }},
    {"electrolyzer_usd_per_kg", [](const Lcoh& b) { return b.electrolyzer / b.kg; }},
    {"storage_usd_per_kg", [](const Lcoh& b) { return b.storage / b.kg; }},
    {"compressor_usd_per_kg", [](const Lcoh& b) { return b.compressor / b.kg; }},
    {"energy_purchases_usd_per_kg", [](const Lcoh& b) { return b.energy_purchases / b.kg; }},
    {"capacity_purchases_usd_per_kg", [](const Lcoh& b) { return b.capacity_purchases / b.kg; }},
    {"ppa_costs_usd_per_kg", [](const Lcoh& b) { return b.ppa_costs / b.kg; }},
    {"ppa_sales_usd_per_kg", [](const Lcoh& b) { return -b.ppa_sales / b.kg; }},
    {"total_usd_per_year", [](const Lcoh& b) { return b.total; }},
    {"h2_kg_per_year", [](const Lcoh& b) { return b.kg; }},
};

bool has_lcoh(const RunRecord& r) { return r.state == RunState::Complete && r.report->lcoh; }

void write(ComparisonFiles& files, const std::filesystem::path& path, const std::string& text) {
  io::write_file_atomic(path, text);
  files.written.push_back(path);
}

}  // namespace

ComparisonFiles write_comparison(const std::vector<RunRecord>& runs,
                                 const std::filesystem::path& dir, bool plots) {
  if (runs.empty()) throw io::IoError("no runs to report");
  std::filesystem::create_directories(dir);
  ComparisonFiles files;
  const std::string head = provenance(runs);

  std::ostringstream status;
  status << head << "label,state,note\n";
  for (const auto& r : runs) {
    status << r.label << ',' << (r.state == RunState::Complete ? "complete" : "partial") << ','
           << r.note << '\n';
    if (r.state != RunState::Complete) files.partial.push_back(r.label);
  }
  write(files, dir / "run_status.csv", status.str());

  Table emissions(runs);
  emissions.row("emissions_tco2", [](const auto& r) { return fmt(r.emissions); });
  emissions.row("h2_tonnes", [](const auto& r) { return fmt(r.h2_tonnes); });
  emissions.row("consequential_tco2_per_th2", [](const auto& r) {
    return r.consequential_emissions ? fmt(*r.consequential_emissions) : std::string();
  });
  emissions.row("baseline", [](const auto& r) { return r.baseline_label.value_or(""); });
  write(files, dir / "emissions_by_case.csv", emissions.str(head));

  Table lcoh(runs);
  for (const auto& row : kLcohRows)
    lcoh.row(row.name, [&](const auto& r) { return r.lcoh ? fmt(row.get(*r.lcoh)) : std::string(); });
  auto ref = std::find_if(runs.begin(), runs.end(), has_lcoh);
  if (ref != runs.end()) {
    for (const auto& r : runs) {
      if (&r == &*ref || !has_lcoh(r)) continue;
      std::vector<std::string> cells;
      for (const auto& row : kLcohRows)
        cells.push_back(fmt(row.get(*r.report->lcoh) - row.get(*ref->report->lcoh)));
      lcoh.add_column("delta_" + r.label + "_vs_" + ref->label, std::move(cells));
    }
  }
  write(files, dir / "lcoh_by_case.csv", lcoh.str(head));

  std::ostringstream rev;
  rev << head
      << "label,resource,ppa,installed_mw,electricity_sales,rps,tmr,capacity_reserve,excess_cap,"
         "net_revenue,total_cost\n";
  for (const auto& r : runs) {
    if (r.state != RunState::Complete) {
      rev << r.label << ",partial,,,,,,,,,\n";
      continue;
    }
    for (const auto& s : r.report->revenues)
      rev << r.label << ',' << s.id << ',' << (s.ppa ? 1 : 0) << ',' << fmt(s.installed_mw) << ','
          << fmt(s.per_mw(s.electricity_sales)) << ',' << fmt(s.per_mw(s.rps)) << ','
          << fmt(s.per_mw(s.tmr)) << ',' << fmt(s.per_mw(s.capacity_reserve)) << ','
          << fmt(s.per_mw(s.excess_cap)) << ',' << fmt(s.per_mw(s.net_revenue)) << ','
          << fmt(s.per_mw(s.total_cost)) << '\n';
  }
  write(files, dir / "revenue_stacks.csv", rev.str());

  if (plots) {
    std::vector<std::string> labels;
    BarSeries em{"emissions", {}};
    for (const auto& r : runs) {
      if (r.state != RunState::Complete) continue;
      labels.push_back(r.label);
      em.values.push_back(r.report->emissions / 1e6);
    }
    write(files, dir / "emissions.svg",
          bar_chart("CO2 emissions by case", labels, {em}, "MtCO2 per year"));

    std::vector<std::string> h2_labels;
    std::vector<BarSeries> parts;
    for (std::size_t k = 1; k < 8; ++k) parts.push_back({kLcohRows[k].name, {}});
    for (const auto& r : runs) {
      if (!has_lcoh(r)) continue;
      h2_labels.push_back(r.label);
      for (std::size_t k = 1; k < 8; ++k) parts[k - 1].values.push_back(kLcohRows[k].get(*r.report->lcoh));
    }
    for (auto& p : parts) p.name.erase(p.name.find("_usd_per_kg"));
    write(files, dir / "lcoh.svg", bar_chart("Levelized cost of hydrogen", h2_labels, parts, "$/kg"));

    for (const auto& r : runs) {
      if (r.state != RunState::Complete || !r.report->prices.tmr_histogram) continue;
      const auto& h = *r.report->prices.tmr_histogram;
      write(files, dir / ("tmr_prices_" + r.label + ".svg"),
            histogram_chart("Hourly matching price, " + r.label, h.labels(), h.counts, "$/MWh"));
    }
  }
  return files;
}

}  // namespace h2cem::report
