#pragma once

// Bounded-variable primal revised simplex.
//
// The LP is brought to equality form A x + s = b with one logical column s_i
// per row, whose bounds encode the row sense. Phase 1 minimizes the sum of
// bound violations of the basic variables (no artificial columns), so the
// solver can re-enter phase 1 from any basis after a refactorization reveals
// drift. Pricing is Dantzig on geometrically scaled data with a two-pass
// Harris ratio test; after a run of degenerate pivots it falls back to
// Bland's rule until the objective moves again.
//
// The basis inverse is a sparse LU of a recent basis (Eigen::SparseLU) plus
// a product-form eta file, rebuilt every `refactor_interval` updates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "h2cem/lp/linear_program.hpp"

namespace h2cem::lp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

template <typename Scalar = double>
struct SolverOptions {
  Scalar feas_tol = Scalar(1e-7);  ///< primal, absolute on scaled data
  Scalar opt_tol = Scalar(1e-7);   ///< reduced costs, absolute on scaled data
  std::uint64_t seed = 0;          ///< rotates the start of the Bland scan
  Index max_iterations = 0;        ///< 0 picks a size-based limit
  int refactor_interval = 100;
  int degenerate_limit = 60;       ///< consecutive degenerate pivots before Bland
};

/// Primal and dual result of a solve. Duals follow the minimization
/// convention: dual[i] = d(objective)/d(rhs_i), so >= rows price >= 0 and
/// <= rows price <= 0 at optimality.
template <typename Scalar = double>
struct Solution {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SolveStatus status = SolveStatus::NumericalFailure;
  Scalar objective = 0;
  Scalar dual_objective = 0;
  Vec primal;
  Vec dual;
  Vec reduced_cost;
  Vec row_activity;
  Index iterations = 0;
  std::shared_ptr<const NameTable> names;

  bool optimal() const { return status == SolveStatus::Optimal; }

  Scalar value(std::string_view variable) const {
    auto j = names->find_variable(variable);
    if (!j) throw std::out_of_range("unknown variable: " + std::string(variable));
    return primal[*j];
  }
  Scalar dual_value(std::string_view constraint) const {
    auto i = names->find_constraint(constraint);
    if (!i) throw std::out_of_range("unknown constraint: " + std::string(constraint));
    return dual[*i];
  }
};

/// Fills row activity, reduced costs and both objective values from the
/// primal and dual vectors already in `sol`.
template <typename Scalar>
void complete_solution(const LinearProgram<Scalar>& lp, Solution<Scalar>& sol) {
  const auto& vars = lp.variables();
  const auto& rows = lp.constraints();
  const Index m = lp.num_constraints(), n = lp.num_variables();
  sol.row_activity.setZero(m);
  for (Index i = 0; i < m; ++i)
    for (const auto& t : rows[i].terms) sol.row_activity[i] += t.coefficient * sol.primal[t.column];

  sol.reduced_cost.resize(n);
  for (Index j = 0; j < n; ++j) sol.reduced_cost[j] = vars[j].cost;
  for (Index i = 0; i < m; ++i)
    for (const auto& t : rows[i].terms) sol.reduced_cost[t.column] -= sol.dual[i] * t.coefficient;

  Scalar obj = lp.objective_offset();
  for (Index j = 0; j < n; ++j) obj += vars[j].cost * sol.primal[j];
  sol.objective = obj;

  Scalar dobj = lp.objective_offset();
  for (Index i = 0; i < m; ++i) dobj += rows[i].rhs * sol.dual[i];
  for (Index j = 0; j < n; ++j) {
    const Scalar d = sol.reduced_cost[j];
    if (d > 0 && std::isfinite(vars[j].lower)) dobj += d * vars[j].lower;
    else if (d < 0 && std::isfinite(vars[j].upper)) dobj += d * vars[j].upper;
  }
  sol.dual_objective = dobj;
}

namespace detail {

template <typename Scalar>
Scalar nearest_power_of_two(Scalar v) {
  if (!(v > 0) || !std::isfinite(v)) return Scalar(1);
  return std::ldexp(Scalar(1), static_cast<int>(std::lround(std::log2(v))));
}

/// Sparse LU of a reference basis plus a product-form eta file.
template <typename Scalar>
class BasisFactor {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SpMat = Eigen::SparseMatrix<Scalar>;

  bool factorize(const SpMat& basis) {
    etas_.clear();
    lu_.analyzePattern(basis);
    lu_.factorize(basis);
    return lu_.info() == Eigen::Success;
  }

  void ftran(Vec& v) {
    Vec tmp = lu_.solve(v);
    v.swap(tmp);
    for (const auto& e : etas_) {
      const Scalar vp = v[e.pivot] / e.pivot_value;
      v[e.pivot] = vp;
      if (vp != Scalar(0))
        for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * vp;
    }
  }

  void btran(Vec& v) {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      Scalar s = v[it->pivot];
      for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v[it->index[k]];
      v[it->pivot] = s / it->pivot_value;
    }
    Vec tmp = lu_.transpose().solve(v);
    v.swap(tmp);
  }

  void update(Index pivot, const Vec& alpha, Scalar drop) {
    Eta e;
    e.pivot = pivot;
    e.pivot_value = alpha[pivot];
    for (Index i = 0; i < alpha.size(); ++i)
      if (i != pivot && std::abs(alpha[i]) > drop) {
        e.index.push_back(i);
        e.value.push_back(alpha[i]);
      }
    etas_.push_back(std::move(e));
  }

  std::size_t num_updates() const { return etas_.size(); }

 private:
  struct Eta {
    Index pivot = 0;
    Scalar pivot_value = 1;
    std::vector<Index> index;
    std::vector<Scalar> value;
  };
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

template <typename Scalar>
class RevisedSimplex {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SpMat = Eigen::SparseMatrix<Scalar>;

  RevisedSimplex(const LinearProgram<Scalar>& lp, const SolverOptions<Scalar>& opts)
      : lp_(lp), opts_(opts) {}

  Solution<Scalar> run() {
    load();
    Solution<Scalar> sol;
    sol.names = std::make_shared<const NameTable>(lp_.names());
    const SolveStatus st = iterate();
    sol.status = st;
    sol.iterations = iterations_;
    extract(sol);
    return sol;
  }

 private:
  enum class State : unsigned char { Basic, AtLower, AtUpper, AtZero };

  static constexpr Scalar kInf = std::numeric_limits<Scalar>::infinity();

  // ---- setup -------------------------------------------------------------

  void load() {
    m_ = lp_.num_constraints();
    n_ = lp_.num_variables();
    total_ = n_ + m_;
    SpMat a = lp_.matrix();
    compute_scaling(a);

    a_ = a;
    for (Index j = 0; j < a_.outerSize(); ++j)
      for (typename SpMat::InnerIterator it(a_, j); it; ++it)
        it.valueRef() *= row_scale_[it.row()] * col_scale_[j];

    cost_.setZero(total_);
    lower_.resize(total_);
    upper_.resize(total_);
    for (Index j = 0; j < n_; ++j) {
      const auto& v = lp_.variable(j);
      const Scalar s = col_scale_[j] * bound_scale_;
      cost_[j] = v.cost * col_scale_[j] / cost_scale_;
      lower_[j] = std::isfinite(v.lower) ? v.lower / s : v.lower;
      upper_[j] = std::isfinite(v.upper) ? v.upper / s : v.upper;
    }
    b_.resize(m_);
    for (Index i = 0; i < m_; ++i) {
      const auto& c = lp_.constraint(i);
      b_[i] = c.rhs * row_scale_[i] / bound_scale_;
      const Index j = n_ + i;
      switch (c.sense) {
        case Sense::LessEqual: lower_[j] = 0; upper_[j] = kInf; break;
        case Sense::GreaterEqual: lower_[j] = -kInf; upper_[j] = 0; break;
        case Sense::Equal: lower_[j] = 0; upper_[j] = 0; break;
      }
    }

    x_.setZero(total_);
    state_.assign(total_, State::AtLower);
    position_.assign(total_, -1);
    basis_.resize(m_);
    for (Index j = 0; j < n_; ++j) place_at_bound(j);
    for (Index i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      position_[n_ + i] = i;
      state_[n_ + i] = State::Basic;
    }
    max_iter_ = opts_.max_iterations > 0 ? opts_.max_iterations : 100 * (m_ + n_) + 1000;
    bland_offset_ = total_ > 0 ? static_cast<Index>(opts_.seed % static_cast<std::uint64_t>(total_)) : 0;
  }

  void place_at_bound(Index j) {
    if (std::isfinite(lower_[j])) {
      x_[j] = lower_[j];
      state_[j] = State::AtLower;
    } else if (std::isfinite(upper_[j])) {
      x_[j] = upper_[j];
      state_[j] = State::AtUpper;
    } else {
      x_[j] = 0;
      state_[j] = State::AtZero;
    }
  }

  // Geometric-mean row/column scaling rounded to powers of two, then one
  // global factor each for bounds and costs.
  void compute_scaling(const SpMat& a) {
    row_scale_.setOnes(m_);
    col_scale_.setOnes(n_);
    Vec rmin(m_), rmax(m_);
    for (int pass = 0; pass < 6; ++pass) {
      rmin.setConstant(kInf);
      rmax.setZero();
      for (Index j = 0; j < a.outerSize(); ++j)
        for (typename SpMat::InnerIterator it(a, j); it; ++it) {
          const Scalar v = std::abs(it.value()) * col_scale_[j];
          if (v == 0) continue;
          rmin[it.row()] = std::min(rmin[it.row()], v);
          rmax[it.row()] = std::max(rmax[it.row()], v);
        }
      for (Index i = 0; i < m_; ++i)
        row_scale_[i] = rmax[i] > 0 ? 1 / std::sqrt(rmin[i] * rmax[i]) : 1;
      for (Index j = 0; j < a.outerSize(); ++j) {
        Scalar lo = kInf, hi = 0;
        for (typename SpMat::InnerIterator it(a, j); it; ++it) {
          const Scalar v = std::abs(it.value()) * row_scale_[it.row()];
          if (v == 0) continue;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        col_scale_[j] = hi > 0 ? 1 / std::sqrt(lo * hi) : 1;
      }
    }
    for (Index i = 0; i < m_; ++i) row_scale_[i] = nearest_power_of_two(row_scale_[i]);
    for (Index j = 0; j < n_; ++j) col_scale_[j] = nearest_power_of_two(col_scale_[j]);

    Scalar log_sum = 0;
    Index count = 0;
    auto accumulate = [&](Scalar v) {
      v = std::abs(v);
      if (v > 0 && std::isfinite(v)) {
        log_sum += std::log(v);
        ++count;
      }
    };
    for (Index i = 0; i < m_; ++i) accumulate(lp_.constraint(i).rhs * row_scale_[i]);
    for (Index j = 0; j < n_; ++j) {
      accumulate(lp_.variable(j).lower / col_scale_[j]);
      accumulate(lp_.variable(j).upper / col_scale_[j]);
    }
    bound_scale_ = count ? nearest_power_of_two(std::exp(log_sum / count)) : Scalar(1);

    log_sum = 0;
    count = 0;
    for (Index j = 0; j < n_; ++j) accumulate(lp_.variable(j).cost * col_scale_[j]);
    cost_scale_ = count ? nearest_power_of_two(std::exp(log_sum / count)) : Scalar(1);
  }

  // ---- linear algebra helpers ---------------------------------------------

  template <typename F>
  void for_column(Index j, F&& f) const {
    if (j < n_) {
      for (typename SpMat::InnerIterator it(a_, j); it; ++it) f(it.row(), it.value());
    } else {
      f(j - n_, Scalar(1));
    }
  }

  Scalar column_dot(Index j, const Vec& y) const {
    if (j >= n_) return y[j - n_];
    Scalar s = 0;
    for (typename SpMat::InnerIterator it(a_, j); it; ++it) s += it.value() * y[it.row()];
    return s;
  }

  bool refactor() {
    std::vector<Eigen::Triplet<Scalar>> trips;
    trips.reserve(static_cast<std::size_t>(m_) * 3);
    for (Index p = 0; p < m_; ++p)
      for_column(basis_[p], [&](Index r, Scalar v) { trips.emplace_back(r, p, v); });
    SpMat bmat(m_, m_);
    bmat.setFromTriplets(trips.begin(), trips.end());
    bmat.makeCompressed();
    if (m_ == 0) return true;
    return factor_.factorize(bmat);
  }

  // Fall back to the all-logical basis; structurals go to their nearest bound.
  void reset_basis() {
    for (Index j = 0; j < n_; ++j) {
      if (state_[j] == State::Basic) {
        position_[j] = -1;
        const Scalar v = x_[j];
        if (std::isfinite(lower_[j]) && (!std::isfinite(upper_[j]) ||
                                         std::abs(v - lower_[j]) <= std::abs(v - upper_[j]))) {
          x_[j] = lower_[j];
          state_[j] = State::AtLower;
        } else if (std::isfinite(upper_[j])) {
          x_[j] = upper_[j];
          state_[j] = State::AtUpper;
        } else {
          x_[j] = 0;
          state_[j] = State::AtZero;
        }
      }
    }
    for (Index i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      position_[n_ + i] = i;
      state_[n_ + i] = State::Basic;
    }
  }

  void recompute_basic_values() {
    Vec rhs = b_;
    for (Index j = 0; j < total_; ++j) {
      if (state_[j] == State::Basic || x_[j] == 0) continue;
      const Scalar xj = x_[j];
      for_column(j, [&](Index r, Scalar v) { rhs[r] -= v * xj; });
    }
    factor_.ftran(rhs);
    for (Index p = 0; p < m_; ++p) x_[basis_[p]] = rhs[p];
  }

  bool fresh_factor() {
    if (!refactor()) {
      reset_basis();
      if (!refactor()) return false;
    }
    recompute_basic_values();
    return true;
  }

  // ---- main loop ----------------------------------------------------------

  SolveStatus iterate() {
    const Scalar ftol = opts_.feas_tol;
    const Scalar dtol = opts_.opt_tol;
    const Scalar piv_tol = Scalar(1e-9);
    if (!fresh_factor()) return SolveStatus::NumericalFailure;
    bool fresh = true;

    Vec y(m_), alpha(m_), cb(m_);
    int degenerate_run = 0;
    bool bland = false;
    int unbounded_retries = 0;

    for (;;) {
      if (iterations_ >= max_iter_) return SolveStatus::IterationLimit;
      if (factor_.num_updates() >= static_cast<std::size_t>(opts_.refactor_interval)) {
        if (!fresh_factor()) return SolveStatus::NumericalFailure;
        fresh = true;
      }

      // Phase from the current basic values.
      bool phase1 = false;
      for (Index p = 0; p < m_; ++p) {
        const Index j = basis_[p];
        Scalar c = 0;
        if (x_[j] < lower_[j] - ftol) c = -1;
        else if (x_[j] > upper_[j] + ftol) c = 1;
        if (c != 0) phase1 = true;
        cb[p] = c;
      }
      if (!phase1)
        for (Index p = 0; p < m_; ++p) cb[p] = cost_[basis_[p]];

      y = cb;
      if (m_ > 0) factor_.btran(y);

      // Pricing.
      Index q = -1;
      Scalar dq = 0, best = 0;
      for (Index k = 0; k < total_; ++k) {
        const Index j = bland ? (k + bland_offset_) % total_ : k;
        const State s = state_[j];
        if (s == State::Basic) continue;
        if (s != State::AtZero && lower_[j] == upper_[j]) continue;
        const Scalar d = (phase1 ? Scalar(0) : cost_[j]) - column_dot(j, y);
        bool eligible = false;
        if (s == State::AtLower) eligible = d < -dtol;
        else if (s == State::AtUpper) eligible = d > dtol;
        else eligible = std::abs(d) > dtol;
        if (!eligible) continue;
        if (bland) {
          q = j;
          dq = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          dq = d;
        }
      }

      if (q < 0) {
        if (!fresh) {
          if (!fresh_factor()) return SolveStatus::NumericalFailure;
          fresh = true;
          continue;
        }
        return phase1 ? SolveStatus::Infeasible : SolveStatus::Optimal;
      }

      alpha.setZero(m_);
      for_column(q, [&](Index r, Scalar v) { alpha[r] = v; });
      if (m_ > 0) factor_.ftran(alpha);

      const Scalar dir = dq < 0 ? Scalar(1) : Scalar(-1);
      const Scalar range = upper_[q] - lower_[q];

      // Bound each basic variable would hit as x_q moves in direction dir.
      auto target = [&](Index p, Scalar delta, Scalar& bound) -> bool {
        const Index j = basis_[p];
        const Scalar xv = x_[j];
        if (delta < 0) {
          if (phase1 && xv > upper_[j] + ftol) { bound = upper_[j]; return true; }
          if (xv < lower_[j] - ftol || !std::isfinite(lower_[j])) return false;
          bound = lower_[j];
          return true;
        }
        if (phase1 && xv < lower_[j] - ftol) { bound = lower_[j]; return true; }
        if (xv > upper_[j] + ftol || !std::isfinite(upper_[j])) return false;
        bound = upper_[j];
        return true;
      };

      Index leave = -1;
      Scalar theta = kInf, leave_bound = 0;
      if (!bland) {
        Scalar relaxed = kInf;
        for (Index p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= piv_tol) continue;
          const Scalar delta = -dir * alpha[p];
          Scalar bound;
          if (!target(p, delta, bound)) continue;
          const Scalar r = (std::abs(x_[basis_[p]] - bound) + ftol) / std::abs(delta);
          relaxed = std::min(relaxed, r);
        }
        if (std::isfinite(relaxed)) {
          Scalar best_pivot = 0;
          for (Index p = 0; p < m_; ++p) {
            if (std::abs(alpha[p]) <= piv_tol) continue;
            const Scalar delta = -dir * alpha[p];
            Scalar bound;
            if (!target(p, delta, bound)) continue;
            const Scalar dist = delta < 0 ? x_[basis_[p]] - bound : bound - x_[basis_[p]];
            const Scalar r = std::max(Scalar(0), dist) / std::abs(delta);
            if (r <= relaxed && std::abs(alpha[p]) > best_pivot) {
              best_pivot = std::abs(alpha[p]);
              leave = p;
              theta = r;
              leave_bound = bound;
            }
          }
        }
      } else {
        for (Index p = 0; p < m_; ++p) {
          if (std::abs(alpha[p]) <= piv_tol) continue;
          const Scalar delta = -dir * alpha[p];
          Scalar bound;
          if (!target(p, delta, bound)) continue;
          const Scalar dist = delta < 0 ? x_[basis_[p]] - bound : bound - x_[basis_[p]];
          const Scalar r = std::max(Scalar(0), dist) / std::abs(delta);
          if (r < theta || (r == theta && leave >= 0 && rank(basis_[p]) < rank(basis_[leave]))) {
            leave = p;
            theta = r;
            leave_bound = bound;
          }
        }
      }

      const bool flip = std::isfinite(range) && range <= theta;
      if (leave < 0 && !flip) {
        // No blocking variable: unbounded in phase 2; numerical noise in phase 1.
        if (!fresh && unbounded_retries++ < 3) {
          if (!fresh_factor()) return SolveStatus::NumericalFailure;
          fresh = true;
          continue;
        }
        if (!phase1) return SolveStatus::Unbounded;
        return SolveStatus::NumericalFailure;
      }
      unbounded_retries = 0;
      if (flip) theta = range;

      ++iterations_;
      const Scalar improvement = theta * std::abs(dq);
      if (improvement <= Scalar(1e-12)) {
        if (++degenerate_run > opts_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      if (theta != 0) {
        x_[q] += dir * theta;
        for (Index p = 0; p < m_; ++p)
          if (alpha[p] != 0) x_[basis_[p]] -= dir * theta * alpha[p];
      }

      if (flip) {
        if (dir > 0) {
          x_[q] = upper_[q];
          state_[q] = State::AtUpper;
        } else {
          x_[q] = lower_[q];
          state_[q] = State::AtLower;
        }
        continue;
      }

      const Index out = basis_[leave];
      x_[out] = leave_bound;
      state_[out] = (leave_bound == lower_[out]) ? State::AtLower : State::AtUpper;
      position_[out] = -1;
      basis_[leave] = q;
      position_[q] = leave;
      state_[q] = State::Basic;
      factor_.update(leave, alpha, Scalar(1e-14));
      fresh = false;
    }
  }

  Index rank(Index j) const { return (j - bland_offset_ + total_) % total_; }

  // ---- results ------------------------------------------------------------

  void extract(Solution<Scalar>& sol) {
    sol.primal.resize(n_);
    for (Index j = 0; j < n_; ++j) sol.primal[j] = x_[j] * col_scale_[j] * bound_scale_;

    sol.dual.setZero(m_);
    if (sol.status == SolveStatus::Optimal && m_ > 0) {
      Vec y(m_);
      for (Index p = 0; p < m_; ++p) y[p] = cost_[basis_[p]];
      factor_.btran(y);
      for (Index i = 0; i < m_; ++i) sol.dual[i] = y[i] * row_scale_[i] * cost_scale_;
    }

    complete_solution(lp_, sol);
  }

  const LinearProgram<Scalar>& lp_;
  SolverOptions<Scalar> opts_;
  Index m_ = 0, n_ = 0, total_ = 0;
  SpMat a_;
  Vec b_, cost_, lower_, upper_, row_scale_, col_scale_, x_;
  Scalar cost_scale_ = 1, bound_scale_ = 1;
  std::vector<State> state_;
  std::vector<Index> basis_, position_;
  BasisFactor<Scalar> factor_;
  Index iterations_ = 0, max_iter_ = 0, bland_offset_ = 0;
};

}  // namespace detail

/// Solves `lp` with the embedded revised simplex. Never throws on
/// infeasible or unbounded input; structural problems (bad bounds,
/// non-finite data, out-of-range columns) are rejected up front.
template <typename Scalar>
Solution<Scalar> solve(const LinearProgram<Scalar>& lp, const SolverOptions<Scalar>& opts = {}) {
  auto problems = lp.check();
  if (!problems.empty()) throw std::invalid_argument("invalid LP: " + problems.front());
  return detail::RevisedSimplex<Scalar>(lp, opts).run();
}

}  // namespace h2cem::lp
