// Command-line front end: validate, run, report, ingest.

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "h2cem/io/case_config.hpp"
#include "h2cem/io/csv.hpp"
#include "h2cem/report/compare.hpp"
#include "h2cem/runs/runs.hpp"
#include "h2cem/scenarios.hpp"

namespace {

enum Exit { kOk = 0, kValidation = 1, kSolve = 2, kIo = 3 };

using namespace h2cem;

// Loads the config and checks every run's case; prints violations.
int load_and_validate(const std::string& path, io::ProjectConfig& cfg) {
  try {
    cfg = io::load_config(path);
  } catch (const io::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  int bad = 0;
  for (const auto& v : validate_case(cfg.base)) {
    std::cerr << "case: " << v << "\n";
    ++bad;
  }
  for (const auto& plan : cfg.runs) {
    try {
      const auto c = runs::materialize(cfg.base, plan);
      for (const auto& v : validate_case(c)) {
        std::cerr << plan.label << ": " << v << "\n";
        ++bad;
      }
    } catch (const std::exception& e) {
      std::cerr << plan.label << ": " << e.what() << "\n";
      ++bad;
    }
  }
  return bad ? kValidation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity expansion with grid-connected hydrogen production"};
  app.require_subcommand(1);

  std::string config;
  auto* validate = app.add_subcommand("validate", "Check a config and every run it defines");
  validate->add_option("--config", config, "Config file")->required();

  auto* run = app.add_subcommand("run", "Solve the runs of a config");
  std::string labels = "*", solver = "config", emit_lp;
  bool force = false;
  std::optional<std::uint64_t> seed;
  int workers = -1;
  run->add_option("--config", config, "Config file")->required();
  run->add_option("--labels", labels, "Glob over run labels");
  run->add_flag("--force", force, "Re-solve completed labels");
  run->add_option("--solver", solver, "embedded or external")
      ->check(CLI::IsMember({"config", "embedded", "external"}));
  run->add_option("--emit-lp", emit_lp, "Write MPS and LP files of every model here");
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--workers", workers, "Parallel solves (default: config, then cores)");

  auto* report = app.add_subcommand("report", "Cross-run tables and plots");
  std::string out_dir, report_dir;
  bool no_plots = false;
  report->add_option("--out", out_dir, "Run output directory")->required();
  report->add_option("--dest", report_dir, "Destination (default <out>/report)");
  report->add_flag("--no-plots", no_plots, "Skip SVG output");

  auto* ingest = app.add_subcommand("ingest", "Build capacity-factor scenarios from plant data");
  std::string registry, generation, library_dir;
  int k = 9, oos = 0;
  std::uint64_t ingest_seed = 0;
  ingest->add_option("--registry", registry, "plant_id,group,capacity_mw")->required();
  ingest->add_option("--generation", generation, "year,hour,plant_id,mwh")->required();
  ingest->add_option("--out", library_dir, "Output directory")->required();
  ingest->add_option("--k", k, "Design years");
  ingest->add_option("--oos", oos, "Out-of-sample years");
  ingest->add_option("--seed", ingest_seed, "Clustering and sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      io::ProjectConfig cfg;
      const int rc = load_and_validate(config, cfg);
      if (rc == kOk) std::cout << "ok: " << cfg.runs.size() << " runs\n";
      return rc;
    }

    if (*run) {
      io::ProjectConfig cfg;
      if (int rc = load_and_validate(config, cfg); rc != kOk) return rc;
      if (seed) cfg.seed = *seed;
      runs::ExecuteOptions opts;
      opts.labels = labels;
      opts.force = force;
      opts.workers = workers > 0 ? workers
                     : cfg.workers > 0 ? cfg.workers
                                       : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
      opts.solver.options.feas_tol = cfg.solver.feas_tol;
      opts.solver.options.opt_tol = cfg.solver.opt_tol;
      opts.solver.backend = solver == "config"     ? cfg.solver.backend
                            : solver == "external" ? io::Backend::External
                                                   : io::Backend::Embedded;
      opts.solver.external_command = cfg.solver.external_command;
      if (opts.solver.backend == io::Backend::External && opts.solver.external_command.empty()) {
        std::cerr << "error: solver.external_command is not set\n";
        return kValidation;
      }
      if (!emit_lp.empty()) opts.solver.emit_lp_dir = emit_lp;
      opts.log = [](const std::string& line) { std::cout << line << std::endl; };
      const auto summary = runs::execute(cfg, opts);
      std::cout << "solved " << summary.solved.size() << ", skipped " << summary.skipped.size()
                << ", failed " << summary.failed.size() << "\n";
      for (const auto& [label, msg] : summary.failed) std::cerr << "failed " << label << ": " << msg << "\n";
      if (summary.any_solve_failure) return kSolve;
      return summary.failed.empty() ? kOk : kValidation;
    }

    if (*report) {
      const auto records = report::collect_runs(out_dir);
      const std::filesystem::path dest =
          report_dir.empty() ? std::filesystem::path(out_dir) / "report" : std::filesystem::path(report_dir);
      const auto files = report::write_comparison(records, dest, !no_plots);
      for (const auto& label : files.partial) std::cerr << "warning: partial run " << label << "\n";
      std::cout << "wrote " << files.written.size() << " files to " << dest.string() << "\n";
      return kOk;
    }

    if (*ingest) {
      Index clamped = 0;
      auto library = scenarios::build_library(scenarios::read_plants(registry, generation), &clamped);
      library.design_years = scenarios::kmeans_reduce(library, k, ingest_seed).design_years;
      library.oos_years = scenarios::sample_oos(library, oos, ingest_seed);
      scenarios::write_library(library, library_dir);
      std::cout << library.years.size() << " years, design:";
      for (const auto& y : library.design_years) std::cout << ' ' << y;
      std::cout << "; clamped hours: " << clamped << "\n";
      return kOk;
    }
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
