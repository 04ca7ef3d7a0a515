#include "h2cem/lp/external_solver.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "h2cem/lp/lp_format.hpp"

namespace h2cem::lp {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += "'\\''";
    else out += ch;
  }
  return out + "'";
}

}  // namespace

Solution<double> read_solution_file(const std::filesystem::path& path, const LinearProgramd& lp) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution file " + path.string());
  Solution<double> sol;
  sol.names = std::make_shared<const NameTable>(lp.names());
  sol.primal.setZero(lp.num_variables());
  sol.dual.setZero(lp.num_constraints());
  std::string line, status = "error";
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key, name;
    ss >> key;
    if (key == "status") {
      ss >> status;
    } else if (key == "objective") {
      ss >> sol.objective;
    } else if (key == "primal" || key == "dual") {
      double v = 0;
      ss >> name >> v;
      if (!ss) throw std::runtime_error("malformed solution line: " + line);
      if (key == "primal") {
        auto j = lp.find_variable(name);
        if (!j) throw std::runtime_error("solution names unknown column " + name);
        sol.primal[*j] = v;
      } else {
        auto i = lp.find_constraint(name);
        if (!i) throw std::runtime_error("solution names unknown row " + name);
        sol.dual[*i] = v;
      }
    }
  }
  if (status == "optimal") sol.status = SolveStatus::Optimal;
  else if (status == "infeasible") sol.status = SolveStatus::Infeasible;
  else if (status == "unbounded") sol.status = SolveStatus::Unbounded;
  else sol.status = SolveStatus::NumericalFailure;
  if (sol.optimal()) complete_solution(lp, sol);
  return sol;
}

Solution<double> solve_external(const LinearProgramd& lp, const ExternalSolver& backend,
                                const std::string& stem) {
  if (backend.command.empty()) throw std::invalid_argument("no external solver command configured");
  std::filesystem::create_directories(backend.work_dir);
  const auto model = backend.work_dir / (stem + ".mps");
  const auto result = backend.work_dir / (stem + ".sol");
  {
    std::ofstream out(model, std::ios::binary | std::ios::trunc);
    out << emit_lp_file(lp, FileFormat::Mps);
    if (!out) throw std::runtime_error("cannot write " + model.string());
  }
  std::filesystem::remove(result);
  const std::string cmd =
      backend.command + " " + quoted(model.string()) + " " + quoted(result.string());
  const int rc = std::system(cmd.c_str());
  const int code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  if (code == 77) throw BackendUnavailable("external backend unavailable: " + backend.command);
  if (code != 0)
    throw std::runtime_error("external backend failed with status " + std::to_string(code) +
                             " on " + model.string());
  return read_solution_file(result, lp);
}

}  // namespace h2cem::lp
