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

#include "robust_contracts/contract_programs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "robust_contracts/single_agent.hpp"

namespace robust_contracts {

using lp::LpProblem;
using lp::Relation;
using lp::Row;
using lp::Term;

namespace {

constexpr double kSeparationTolerance = 1e-9;

std::size_t outcome_index(std::span<const double> outcomes, double y) {
  for (std::size_t j = 0; j < outcomes.size(); ++j) {
    if (outcomes[j] == y) return j;
  }
  throw DomainMismatchError(fmt::format("known outcome {} is not on the outcome grid", y));
}

void require_optimal(const lp::LpSolution& sol, const char* what) {
  if (!sol.optimal()) {
    throw InternalConsistencyError(
        fmt::format("{} did not solve to optimality: {}", what, lp::to_string(sol.status)));
  }
}

void check_slope_inputs(std::span<const double> alpha_grid, std::span<const double> masses,
                        std::span<const double> u_values) {
  if (alpha_grid.empty() || masses.size() != alpha_grid.size() ||
      u_values.size() != alpha_grid.size()) {
    throw ValidationError("slope grid, masses and utilities must be nonempty and equal length");
  }
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0.0 && alpha_grid[i] < 1.0) ||
        (i > 0 && alpha_grid[i] <= alpha_grid[i - 1])) {
      throw ValidationError("slope grid must be strictly increasing inside [0, 1)");
    }
    if (!(masses[i] >= 0.0)) throw ValidationError("slope masses must be nonnegative");
    if (!std::isfinite(u_values[i])) throw ValidationError("utility values must be finite");
  }
}

// Inner worst-case menu program over the contracts listed in `active`.
double solve_menu_program(const Technology& known, const ContractGrid& grid,
                          std::span<const double> p, const std::vector<std::size_t>& active,
                          const lp::SimplexOptions& options) {
  const std::size_t ny = grid.outcomes.size();
  const std::size_t n = active.size();
  LpProblem problem(lp::Sense::kMinimize);
  // Per active contract: q_0..q_{ny-1}, then c.
  auto q = [ny](std::size_t k, std::size_t j) { return k * (ny + 1) + j; };
  auto c = [ny](std::size_t k) { return k * (ny + 1) + ny; };
  for (std::size_t k = 0; k < n; ++k) {
    const auto& w = grid.contracts[active[k]];
    for (std::size_t j = 0; j < ny; ++j) {
      problem.add_variable(p[active[k]] * (grid.outcomes[j] - w[j]));
    }
    problem.add_variable(0.0);
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto& w = grid.contracts[active[k]];
    std::vector<Term> simplex, floor;
    for (std::size_t j = 0; j < ny; ++j) {
      simplex.push_back({q(k, j), 1.0});
      floor.push_back({q(k, j), w[j]});
    }
    floor.push_back({c(k), -1.0});
    problem.add_row(std::move(simplex), Relation::kEqual, 1.0);
    problem.add_row(std::move(floor), Relation::kGreaterEqual,
                    contract_u_lower(known, grid.outcomes, w));
  }

  auto ic_row = [&](std::size_t k, std::size_t k2) {
    const auto& w = grid.contracts[active[k]];
    Row row;
    row.relation = Relation::kGreaterEqual;
    for (std::size_t j = 0; j < ny; ++j) {
      row.terms.push_back({q(k, j), w[j]});
      row.terms.push_back({q(k2, j), -w[j]});
    }
    row.terms.push_back({c(k), -1.0});
    row.terms.push_back({c(k2), 1.0});
    return row;
  };
  auto separator = [&](std::span<const double> x) {
    std::vector<Row> rows;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& w = grid.contracts[active[k]];
      auto utility = [&](std::size_t item) {
        double u = -x[c(item)];
        for (std::size_t j = 0; j < ny; ++j) u += w[j] * x[q(item, j)];
        return u;
      };
      const double own = utility(k);
      for (std::size_t k2 = 0; k2 < n; ++k2) {
        if (k2 != k && utility(k2) > own + kSeparationTolerance) rows.push_back(ic_row(k, k2));
      }
    }
    return rows;
  };
  const lp::LpSolution sol = lp::solve_with_lazy_rows(std::move(problem), separator, options);
  require_optimal(sol, "inner menu program");
  return sol.value;
}

}  // namespace

ContractGrid enumerate_contracts(std::span<const double> outcomes,
                                 std::span<const double> payments, std::size_t limit) {
  if (outcomes.empty() || payments.empty()) {
    throw ValidationError("outcome and payment grids must be nonempty");
  }
  for (double s : payments) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw ValidationError(fmt::format("payment level {} is not a finite nonnegative value", s));
    }
  }
  double count = 1.0;
  for (std::size_t j = 0; j < outcomes.size(); ++j) count *= static_cast<double>(payments.size());
  if (count > static_cast<double>(limit)) {
    throw lp::DimensionLimitError(fmt::format(
        "{} payment levels on {} outcomes give {} contracts; the limit is {}", payments.size(),
        outcomes.size(), count, limit));
  }
  ContractGrid grid;
  grid.outcomes.assign(outcomes.begin(), outcomes.end());
  grid.payments.assign(payments.begin(), payments.end());
  const std::size_t total = static_cast<std::size_t>(count);
  const std::size_t ny = outcomes.size();
  grid.contracts.reserve(total);
  std::vector<std::size_t> digits(ny, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> w(ny);
    for (std::size_t j = 0; j < ny; ++j) w[j] = payments[digits[j]];
    grid.contracts.push_back(std::move(w));
    for (std::size_t j = ny; j-- > 0;) {
      if (++digits[j] < payments.size()) break;
      digits[j] = 0;
    }
  }
  return grid;
}

std::vector<double> payment_grid(double alpha_star, double max_outcome, std::size_t n) {
  if (n == 0) throw ValidationError("payment grid needs at least one level");
  if (n == 1) return {0.0};
  std::vector<double> levels(n);
  for (std::size_t k = 0; k < n; ++k) {
    levels[k] = alpha_star * max_outcome * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return levels;
}

double contract_u_lower(const Technology& known, std::span<const double> outcomes,
                        std::span<const double> w) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Action& a : known.actions()) {
    double pay = 0.0;
    for (const Outcome& o : a.dist().support()) {
      if (o.prob == 0.0) continue;
      pay += o.prob * w[outcome_index(outcomes, o.value)];
    }
    best = std::max(best, pay - a.cost());
  }
  return best;
}

std::size_t MaxMaxProgram::lambda(std::size_t w, std::size_t w2) const {
  const std::size_t n = grid.contracts.size();
  return lambda_offset + w * (n - 1) + (w2 < w ? w2 : w2 - 1);
}

MaxMaxProgram build_maxmax(const Technology& known, std::span<const double> outcomes,
                           std::span<const double> payments, std::size_t limit) {
  MaxMaxProgram prog;
  prog.grid = enumerate_contracts(outcomes, payments, limit);
  const auto& contracts = prog.grid.contracts;
  const std::size_t n = contracts.size();
  const std::size_t ny = outcomes.size();
  LpProblem& problem = prog.problem;

  prog.p_offset = problem.num_variables();
  for (std::size_t w = 0; w < n; ++w) problem.add_variable(0.0);
  prog.lambda_offset = problem.num_variables();
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t w2 = 0; w2 + 1 < n; ++w2) problem.add_variable(0.0);
  }
  prog.mu_offset = problem.num_variables();
  for (std::size_t w = 0; w < n; ++w) {
    problem.add_variable(contract_u_lower(known, outcomes, contracts[w]));
  }
  prog.theta_offset = problem.num_variables();
  for (std::size_t w = 0; w < n; ++w) problem.add_variable(1.0, -lp::kInfinity, lp::kInfinity);

  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t j = 0; j < ny; ++j) {
      std::vector<Term> terms;
      terms.reserve(2 * n + 2);
      for (std::size_t w2 = 0; w2 < n; ++w2) {
        if (w2 == w) continue;
        terms.push_back({prog.lambda(w, w2), contracts[w][j]});
        terms.push_back({prog.lambda(w2, w), -contracts[w2][j]});
      }
      terms.push_back({prog.mu(w), contracts[w][j]});
      terms.push_back({prog.theta(w), 1.0});
      terms.push_back({prog.p(w), -(outcomes[j] - contracts[w][j])});
      problem.add_row(std::move(terms), Relation::kLessEqual, 0.0);
    }
  }
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<Term> terms;
    terms.reserve(2 * n);
    for (std::size_t w2 = 0; w2 < n; ++w2) {
      if (w2 == w) continue;
      terms.push_back({prog.lambda(w2, w), 1.0});
      terms.push_back({prog.lambda(w, w2), -1.0});
    }
    terms.push_back({prog.mu(w), -1.0});
    problem.add_row(std::move(terms), Relation::kLessEqual, 0.0);
  }
  std::vector<Term> total;
  for (std::size_t w = 0; w < n; ++w) total.push_back({prog.p(w), 1.0});
  problem.add_row(std::move(total), Relation::kEqual, 1.0);
  return prog;
}

lp::SimplexOptions maxmax_options() {
  lp::SimplexOptions options;
  options.max_variables = 400'000;
  options.max_rows = 20'000;
  return options;
}

MaxMaxResult solve_maxmax(const Technology& known, std::span<const double> outcomes,
                          std::span<const double> payments, const lp::SimplexOptions& options,
                          std::size_t limit) {
  MaxMaxProgram prog = build_maxmax(known, outcomes, payments, limit);
  const lp::LpSolution sol = lp::simplex_solve(prog.problem, options);
  MaxMaxResult result;
  result.status = sol.status;
  result.iterations = sol.iterations;
  result.grid = std::move(prog.grid);
  if (!sol.optimal()) return result;
  result.value = sol.value;
  result.distribution.resize(result.grid.contracts.size());
  for (std::size_t w = 0; w < result.distribution.size(); ++w) {
    result.distribution[w] = std::max(0.0, sol.primal[prog.p(w)]);
  }
  return result;
}

double sign_check_maxmin(const Technology& known, const ContractGrid& grid,
                         std::span<const double> p, const lp::SimplexOptions& options) {
  if (p.size() != grid.contracts.size()) {
    throw ValidationError("contract distribution does not match the contract grid");
  }
  std::vector<std::size_t> active;
  for (std::size_t w = 0; w < p.size(); ++w) {
    if (p[w] < 0.0) throw ValidationError("contract distribution has a negative mass");
    if (p[w] > 0.0) active.push_back(w);
  }
  if (active.empty()) throw ValidationError("contract distribution has no mass");
  return solve_menu_program(known, grid, p, active, options);
}

double maxmin_full(const Technology& known, const ContractGrid& grid, std::span<const double> p,
                   const lp::SimplexOptions& options) {
  if (p.size() != grid.contracts.size()) {
    throw ValidationError("contract distribution does not match the contract grid");
  }
  std::vector<std::size_t> all(p.size());
  for (std::size_t w = 0; w < all.size(); ++w) all[w] = w;
  return solve_menu_program(known, grid, p, all, options);
}

double solve_p1(std::span<const double> alpha_grid, std::span<const double> masses,
                std::span<const double> u_values, const lp::SimplexOptions& options) {
  check_slope_inputs(alpha_grid, masses, u_values);
  const std::size_t n = alpha_grid.size();
  LpProblem problem(lp::Sense::kMinimize);
  auto e = [](std::size_t i) { return 2 * i; };
  auto c = [](std::size_t i) { return 2 * i + 1; };
  for (std::size_t i = 0; i < n; ++i) {
    problem.add_variable(masses[i] * (1.0 - alpha_grid[i]));
    problem.add_variable(0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    problem.add_row({{e(i), alpha_grid[i]}, {c(i), -1.0}}, Relation::kGreaterEqual,
                    u_values[i]);
  }
  auto ic_row = [&](std::size_t i, std::size_t j) {
    return Row{{{e(i), alpha_grid[i]}, {c(i), -1.0}, {e(j), -alpha_grid[i]}, {c(j), 1.0}},
               Relation::kGreaterEqual,
               0.0,
               {}};
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    problem.add_row(ic_row(i, i + 1));
    problem.add_row(ic_row(i + 1, i));
  }
  auto separator = [&](std::span<const double> x) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < n; ++i) {
      const double own = alpha_grid[i] * x[e(i)] - x[c(i)];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (alpha_grid[i] * x[e(j)] - x[c(j)] > own + kSeparationTolerance) {
          rows.push_back(ic_row(i, j));
        }
      }
    }
    return rows;
  };
  const lp::LpSolution sol = lp::solve_with_lazy_rows(std::move(problem), separator, options);
  require_optimal(sol, "program P1");
  return sol.value;
}

double solve_p2(std::span<const double> alpha_grid, std::span<const double> masses,
                std::span<const double> u_values, const lp::SimplexOptions& options) {
  check_slope_inputs(alpha_grid, masses, u_values);
  const std::size_t n = alpha_grid.size();
  LpProblem problem(lp::Sense::kMinimize);
  for (std::size_t i = 0; i < n; ++i) problem.add_variable(masses[i] * (1.0 - alpha_grid[i]));
  for (std::size_t i = 1; i < n; ++i) {
    problem.add_row({{i, 1.0}, {i - 1, -1.0}}, Relation::kGreaterEqual, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Term> terms;
    for (std::size_t k = 0; k <= i; ++k) {
      const double width = alpha_grid[k] - (k == 0 ? 0.0 : alpha_grid[k - 1]);
      if (width > 0.0) terms.push_back({k, width});
    }
    if (terms.empty()) {
      if (u_values[i] > 0.0) {
        throw ValidationError("positive utility required at slope 0");
      }
      continue;
    }
    problem.add_row(std::move(terms), Relation::kGreaterEqual, u_values[i]);
  }
  const lp::LpSolution sol = lp::simplex_solve(problem, options);
  require_optimal(sol, "program P2");
  return sol.value;
}

SlopeProgramValues solve_p1_p2(std::span<const double> alpha_grid,
                               std::span<const double> masses,
                               std::span<const double> u_values,
                               const lp::SimplexOptions& options) {
  return {solve_p1(alpha_grid, masses, u_values, options),
          solve_p2(alpha_grid, masses, u_values, options)};
}

std::vector<double> discretize_cdf(const RandomizedLinearContract& g,
                                   std::span<const double> alpha_grid) {
  std::vector<double> masses(alpha_grid.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    const double cur = g.cdf(alpha_grid[i]);
    masses[i] = std::max(0.0, cur - prev);
    prev = std::max(prev, cur);
  }
  if (!masses.empty()) masses.back() += std::max(0.0, 1.0 - prev);
  return masses;
}

SlopeProgramValues solve_p1_p2(const Technology& known, std::span<const double> alpha_grid,
                               const RandomizedLinearContract& g,
                               const lp::SimplexOptions& options) {
  const std::vector<double> masses = discretize_cdf(g, alpha_grid);
  std::vector<double> u_values(alpha_grid.size());
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    u_values[i] = u_lower(known, alpha_grid[i]);
  }
  return solve_p1_p2(alpha_grid, masses, u_values, options);
}

}  // namespace robust_contracts
