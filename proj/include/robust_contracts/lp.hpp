// Copyright 2026 The Robust Contracts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Self-contained linear programming: a modeling object with sparse rows and a
// two-phase revised simplex solver with a dense basis inverse.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace robust_contracts::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };

const char* to_string(Status status);

// Problem exceeds the configured solver limits.
class DimensionLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Row {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

struct Variable {
  double objective = 0.0;
  double lower = 0.0;
  double upper = kInfinity;
  std::string name;
};

class LpProblem {
 public:
  explicit LpProblem(Sense sense = Sense::kMinimize) : sense_(sense) {}

  std::size_t add_variable(double objective, double lower = 0.0,
                           double upper = kInfinity, std::string name = {});
  std::size_t add_row(std::vector<Term> terms, Relation relation, double rhs,
                      std::string name = {});
  void add_row(Row row);

  Sense sense() const { return sense_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const Variable& variable(std::size_t j) const { return variables_.at(j); }
  const Row& row(std::size_t i) const { return rows_.at(i); }
  std::span<const Variable> variables() const { return variables_; }
  std::span<const Row> rows() const { return rows_; }

  double objective_value(std::span<const double> x) const;
  double row_activity(std::size_t i, std::span<const double> x) const;
  // Largest violation of any row or bound by x.
  double max_violation(std::span<const double> x) const;

 private:
  Sense sense_;
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
};

struct LpSolution {
  Status status = Status::kNumericalFailure;
  double value = 0.0;
  std::vector<double> primal;
  std::size_t iterations = 0;
  double max_violation = 0.0;

  bool optimal() const { return status == Status::kOptimal; }
};

struct SimplexOptions {
  std::size_t max_variables = 5000;
  std::size_t max_rows = 5000;
  std::size_t max_iterations = 2'000'000;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // A returned optimum must satisfy every row and bound to this accuracy.
  double certify_tolerance = 1e-7;
  std::size_t refactor_interval = 1000;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
  // Relative size of the random right-hand-side relaxation applied while
  // pivoting and removed before the solution is reported; 0 disables it.
  double perturbation = 1e-7;
  // Use Bland's rule for every pivot.
  bool bland_only = false;
};

/// Two-phase revised simplex. Dantzig pricing, with Bland's smallest-index
/// rule taking over during runs of degenerate pivots so the method cannot
/// cycle. Throws DimensionLimitError when the problem exceeds the limits.
LpSolution simplex_solve(const LpProblem& problem, const SimplexOptions& options = {});

/// Rows violated by a candidate primal point; empty when none are.
using RowSeparator = std::function<std::vector<Row>(std::span<const double> primal)>;

/// Solves a problem whose full row family is too large to state up front:
/// re-solves after appending the separator's violated rows until none
/// remain. The result is optimal for the full family.
LpSolution solve_with_lazy_rows(LpProblem problem, const RowSeparator& separator,
                                const SimplexOptions& options = {},
                                std::size_t max_rounds = 200);

/// CPLEX-LP style text: objective, then constraint rows, then bounds.
std::string export_text(const LpProblem& problem);

}  // namespace robust_contracts::lp
