#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace h2cem::lp {

using Index = Eigen::Index;

enum class Sense { LessEqual, Equal, GreaterEqual };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "?";
}

template <typename Scalar>
constexpr Scalar infinity() { return std::numeric_limits<Scalar>::infinity(); }

template <typename Scalar>
struct Variable {
  std::string name;
  Scalar lower = 0;
  Scalar upper = infinity<Scalar>();
  Scalar cost = 0;
};

template <typename Scalar>
struct Term {
  Index column;
  Scalar coefficient;
};

template <typename Scalar>
struct Constraint {
  std::string name;
  std::vector<Term<Scalar>> terms;
  Sense sense = Sense::Equal;
  Scalar rhs = 0;
};

/// Name lookup shared between a program and the solutions computed from it.
struct NameTable {
  std::vector<std::string> variables;
  std::vector<std::string> constraints;
  std::unordered_map<std::string, Index> variable_index;
  std::unordered_map<std::string, Index> constraint_index;

  std::optional<Index> find_variable(std::string_view name) const {
    auto it = variable_index.find(std::string(name));
    if (it == variable_index.end()) return std::nullopt;
    return it->second;
  }
  std::optional<Index> find_constraint(std::string_view name) const {
    auto it = constraint_index.find(std::string(name));
    if (it == constraint_index.end()) return std::nullopt;
    return it->second;
  }
};

class DuplicateNameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sparse minimization LP: min c'x + offset subject to row senses and
/// column bounds. Rows are stored as sparse term lists; duplicate column
/// entries within a row are merged on insertion.
template <typename Scalar = double>
class LinearProgram {
 public:
  using VariableType = Variable<Scalar>;
  using ConstraintType = Constraint<Scalar>;
  using TermType = Term<Scalar>;

  Index add_variable(std::string name, Scalar lower = 0,
                     Scalar upper = infinity<Scalar>(), Scalar cost = 0) {
    if (names_.variable_index.count(name))
      throw DuplicateNameError("duplicate variable name: " + name);
    const Index id = static_cast<Index>(variables_.size());
    names_.variable_index.emplace(name, id);
    names_.variables.push_back(name);
    variables_.push_back({std::move(name), lower, upper, cost});
    return id;
  }

  Index add_constraint(std::string name, std::vector<TermType> terms,
                       Sense sense, Scalar rhs) {
    if (names_.constraint_index.count(name))
      throw DuplicateNameError("duplicate constraint name: " + name);
    std::sort(terms.begin(), terms.end(),
              [](const TermType& a, const TermType& b) { return a.column < b.column; });
    std::vector<TermType> merged;
    merged.reserve(terms.size());
    for (const auto& t : terms) {
      if (!merged.empty() && merged.back().column == t.column)
        merged.back().coefficient += t.coefficient;
      else
        merged.push_back(t);
    }
    const Index id = static_cast<Index>(constraints_.size());
    names_.constraint_index.emplace(name, id);
    names_.constraints.push_back(name);
    constraints_.push_back({std::move(name), std::move(merged), sense, rhs});
    return id;
  }

  void set_cost(Index j, Scalar c) { variables_[j].cost = c; }
  void add_cost(Index j, Scalar c) { variables_[j].cost += c; }
  void set_bounds(Index j, Scalar lower, Scalar upper) {
    variables_[j].lower = lower;
    variables_[j].upper = upper;
  }

  Scalar objective_offset() const { return offset_; }
  void set_objective_offset(Scalar v) { offset_ = v; }

  Index num_variables() const { return static_cast<Index>(variables_.size()); }
  Index num_constraints() const { return static_cast<Index>(constraints_.size()); }
  const std::vector<VariableType>& variables() const { return variables_; }
  const std::vector<ConstraintType>& constraints() const { return constraints_; }
  const VariableType& variable(Index j) const { return variables_[j]; }
  const ConstraintType& constraint(Index i) const { return constraints_[i]; }
  const NameTable& names() const { return names_; }

  std::optional<Index> find_variable(std::string_view name) const {
    return names_.find_variable(name);
  }
  std::optional<Index> find_constraint(std::string_view name) const {
    return names_.find_constraint(name);
  }

  /// Row-wise constraint matrix as a column-major sparse matrix.
  Eigen::SparseMatrix<Scalar> matrix() const {
    std::vector<Eigen::Triplet<Scalar>> trips;
    std::size_t nnz = 0;
    for (const auto& c : constraints_) nnz += c.terms.size();
    trips.reserve(nnz);
    for (Index i = 0; i < num_constraints(); ++i)
      for (const auto& t : constraints_[i].terms)
        if (t.coefficient != Scalar(0)) trips.emplace_back(i, t.column, t.coefficient);
    Eigen::SparseMatrix<Scalar> a(num_constraints(), num_variables());
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();
    return a;
  }

  /// Violations of the structural invariants; empty when the LP is solvable input.
  std::vector<std::string> check() const {
    std::vector<std::string> out;
    using std::isfinite;
    for (const auto& v : variables_) {
      if (!isfinite(v.cost)) out.push_back("non-finite cost on " + v.name);
      if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper ||
          v.lower == infinity<Scalar>() || v.upper == -infinity<Scalar>())
        out.push_back("invalid bounds on " + v.name);
    }
    for (const auto& c : constraints_) {
      if (!isfinite(c.rhs)) out.push_back("non-finite rhs on " + c.name);
      for (const auto& t : c.terms) {
        if (!isfinite(t.coefficient)) out.push_back("non-finite coefficient in " + c.name);
        if (t.column < 0 || t.column >= num_variables())
          out.push_back("column index out of range in " + c.name);
      }
    }
    if (!isfinite(offset_)) out.push_back("non-finite objective offset");
    return out;
  }

 private:
  std::vector<VariableType> variables_;
  std::vector<ConstraintType> constraints_;
  NameTable names_;
  Scalar offset_ = 0;
};

using LinearProgramd = LinearProgram<double>;

}  // namespace h2cem::lp
