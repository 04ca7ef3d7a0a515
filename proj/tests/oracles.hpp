#pragma once

// Test-only reference computations. Nothing here calls into the solver.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "h2cem/lp/linear_program.hpp"

namespace oracle {

struct VertexResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
};

/// Minimum of c'x over the basic feasible solutions of a box-bounded LP,
/// by enumerating every active set of n linearly independent constraints.
inline VertexResult enumerate_vertices(const h2cem::lp::LinearProgramd& lp, double tol = 1e-9) {
  using h2cem::lp::Sense;
  const int n = static_cast<int>(lp.num_variables());
  const Eigen::MatrixXd a = Eigen::MatrixXd(lp.matrix());
  struct Hyperplane {
    Eigen::RowVectorXd row;
    double rhs;
  };
  std::vector<Hyperplane> mandatory, optional;
  for (int i = 0; i < lp.num_constraints(); ++i) {
    Hyperplane h{a.row(i), lp.constraint(i).rhs};
    if (h.row.isZero()) continue;  // 0 = rhs is settled by the feasibility check
    (lp.constraint(i).sense == Sense::Equal ? mandatory : optional).push_back(h);
  }
  for (int j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e[j] = 1;
    optional.push_back({e, lp.variable(j).lower});
    optional.push_back({e, lp.variable(j).upper});
  }
  Eigen::VectorXd c(n);
  for (int j = 0; j < n; ++j) c[j] = lp.variable(j).cost;

  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j)
      if (x[j] < lp.variable(j).lower - tol || x[j] > lp.variable(j).upper + tol) return false;
    const Eigen::VectorXd act = a * x;
    for (int i = 0; i < lp.num_constraints(); ++i) {
      const auto& r = lp.constraint(i);
      const double scale = tol * (1 + std::abs(r.rhs));
      if (r.sense == Sense::LessEqual && act[i] > r.rhs + scale) return false;
      if (r.sense == Sense::GreaterEqual && act[i] < r.rhs - scale) return false;
      if (r.sense == Sense::Equal && std::abs(act[i] - r.rhs) > scale) return false;
    }
    return true;
  };

  VertexResult best;
  const int need = n - static_cast<int>(mandatory.size());
  if (need < 0) {
    // Overdetermined equalities: try every n-subset of the equalities.
    optional = mandatory;
    mandatory.clear();
  }
  const int k = n - static_cast<int>(mandatory.size());
  std::vector<int> pick(k);
  const int pool = static_cast<int>(optional.size());
  if (k > pool) return best;
  for (int i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    int r = 0;
    for (const auto& h : mandatory) { m.row(r) = h.row; rhs[r++] = h.rhs; }
    for (int i : pick) { m.row(r) = optional[i].row; rhs[r++] = optional[i].rhs; }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.rank() == n) {
      const Eigen::VectorXd x = lu.solve(rhs);
      if (feasible(x)) {
        const double obj = c.dot(x) + lp.objective_offset();
        if (!best.feasible || obj < best.objective) {
          best.feasible = true;
          best.objective = obj;
          best.x = x;
        }
      }
    }
    int i = k - 1;
    while (i >= 0 && pick[i] == pool - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

/// Random box-bounded LP with small integer data; about a quarter of the
/// instances are built infeasible-prone by drawing rhs without a witness.
inline h2cem::lp::LinearProgramd random_lp(std::mt19937_64& rng) {
  using h2cem::lp::Sense;
  std::uniform_int_distribution<int> nvar(1, 6), nrow(1, 8), coef(-5, 5), pct(0, 99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  h2cem::lp::LinearProgramd lp;
  const int n = nvar(rng), m = nrow(rng);
  Eigen::VectorXd witness(n);
  for (int j = 0; j < n; ++j) {
    const double lo = pct(rng) < 30 ? -3.0 : 0.0;
    const double hi = pct(rng) < 50 ? 10.0 : 6.0;
    lp.add_variable("x" + std::to_string(j), lo, hi, coef(rng));
    witness[j] = lo + (hi - lo) * unit(rng);
  }
  const bool use_witness = pct(rng) < 75;
  for (int i = 0; i < m; ++i) {
    std::vector<h2cem::lp::Term<double>> terms;
    double act = 0;
    for (int j = 0; j < n; ++j) {
      if (pct(rng) < 30) continue;
      const int v = coef(rng);
      if (v == 0) continue;
      terms.push_back({j, double(v)});
      act += v * witness[j];
    }
    const int s = pct(rng);
    const Sense sense = s < 45 ? Sense::LessEqual : (s < 85 ? Sense::GreaterEqual : Sense::Equal);
    double rhs;
    if (use_witness) {
      const double slack = std::round(3 * unit(rng));
      rhs = sense == Sense::LessEqual ? std::ceil(act) + slack
          : sense == Sense::GreaterEqual ? std::floor(act) - slack
          : act;
    } else {
      rhs = coef(rng) * 3.0;
    }
    lp.add_constraint("r" + std::to_string(i), std::move(terms), sense, rhs);
  }
  return lp;
}

}  // namespace oracle
