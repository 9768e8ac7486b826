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

// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "robust_contracts/adversary.hpp"
#include "robust_contracts/contract_programs.hpp"
#include "robust_contracts/lagrangian.hpp"
#include "robust_contracts/single_agent.hpp"
#include "robust_contracts/team.hpp"
#include "team_support.hpp"
#include "test_support.hpp"

using namespace robust_contracts;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

Verdict closed_form() {
  const auto start = std::chrono::steady_clock::now();
  double worst_residual = 0.0;
  double worst_value = 0.0;
  double worst_ratio = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double c0 = k / 10.0;
    const SingleAgentSolution sol =
        critical_slope(rc_test::point_technology({{1.0, c0}}));
    const double a = sol.alpha_star;
    worst_residual = std::max(worst_residual, std::abs(a + (1.0 - a) * std::log(1.0 - a) - c0));
    worst_value = std::max(worst_value, std::abs(sol.value - (1.0 - a)));
    worst_ratio = std::max(worst_ratio, std::abs(sol.value - (a - c0) / -std::log(1.0 - a)));
  }
  const double elapsed = seconds_since(start);
  return {worst_residual <= 1e-10 && worst_value <= 1e-12 && worst_ratio <= 1e-12 && elapsed < 1.0,
          fmt::format("max residual {:.2e}, |V - (1 - a*)| {:.2e}, |V - u/-ln| {:.2e}, {:.3f} s",
                      worst_residual, worst_value, worst_ratio, elapsed)};
}

Verdict degenerate() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> top(1.0, 3.0);
  std::uniform_real_distribution<double> mean(0.1, 3.0);
  std::uniform_real_distribution<double> frac(0.3, 1.2);
  std::uniform_int_distribution<int> count(1, 4);
  int accepted = 0;
  double worst = 0.0;
  while (accepted < 200) {
    const double e0 = top(rng);
    std::vector<std::pair<double, double>> mc = {{e0, 0.0}};
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const double e = mean(rng);
      mc.emplace_back(e, e * frac(rng));
    }
    // Keep instances where the zero-cost action clearly dominates the ratio.
    std::vector<std::pair<double, double>> costly(mc.begin() + 1, mc.end());
    if (rc_test::reference_grid_ratio(costly, 20000) > e0 - 1e-3) continue;
    ++accepted;
    const SingleAgentSolution sol = critical_slope(rc_test::point_technology(mc));
    worst = std::max(worst, std::abs(sol.value - rc_test::reference_deterministic(mc)));
  }
  return {worst <= 1e-9, fmt::format("200 instances, max |V - deterministic optimum| {:.2e}", worst)};
}

Verdict upper_bound() {
  const auto start = std::chrono::steady_clock::now();
  const Technology t = rc_test::canonical();
  const SingleAgentSolution sol = critical_slope(t);
  const auto contracts = random_contract_grid(t, sol.alpha_star, 10000, 42);
  const UpperBoundReport report = verify_upper_bound(t, contracts);
  const double elapsed = seconds_since(start);
  const bool in_band = std::abs(report.max_payoff - sol.value) <= 1e-3;
  return {in_band && elapsed < 30.0,
          fmt::format("{} contracts, max payoff {:.12g} vs V {:.12g}, {:.2f} s", report.contracts,
                      report.max_payoff, sol.value, elapsed)};
}

Verdict lower_bound() {
  const auto start = std::chrono::steady_clock::now();
  const LowerBoundReport report = verify_lower_bound(rc_test::canonical(), 1000, 42);
  const double elapsed = seconds_since(start);
  return {report.min_payoff >= report.bound - 1e-9 && elapsed < 30.0,
          fmt::format("1000 supersets, min payoff {:.12g} vs V {:.12g}, {:.2f} s",
                      report.min_payoff, report.bound, elapsed)};
}

Verdict lp_cross_check() {
  const Technology t = rc_test::canonical();
  const SingleAgentSolution sol = critical_slope(t);
  const std::vector<double> outcomes = {0.0, 1.0};
  bool pass = true;
  double previous_gap = INFINITY;
  std::string detail;
  for (std::size_t n : {4, 8, 16}) {
    const auto payments = payment_grid(sol.alpha_star, 1.0, n);
    const MaxMaxResult r = solve_maxmax(t, outcomes, payments);
    const double gap = sol.value - r.value;
    const double inner = sign_check_maxmin(t, r.grid, r.distribution);
    pass = pass && r.status == lp::Status::kOptimal && r.value <= sol.value + 1e-6 &&
           gap <= previous_gap && std::abs(inner - r.value) <= 1e-6;
    previous_gap = gap;
    detail += fmt::format("|S|={} gap {:.6f} dual diff {:.1e}; ", n, gap, std::abs(inner - r.value));
  }
  pass = pass && previous_gap <= 5e-2;
  return {pass, detail.substr(0, detail.size() - 2)};
}

Verdict myerson() {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> size(3, 40);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Technology t = rc_test::point_technology(rc_test::random_mean_costs(rng));
    const int n = size(rng);
    std::vector<double> a(n);
    double total = 0.0;
    for (double& x : a) total += (x = unit(rng) + 0.05);
    double acc = trial % 2 == 0 ? 0.0 : 0.02;
    for (double& x : a) {
      const double step = x / total * 0.95;
      x = acc;
      acc += step;
    }
    std::vector<double> m(n), u(n);
    double mass = 0.0;
    for (double& x : m) mass += (x = unit(rng));
    for (double& x : m) x /= mass;
    for (int i = 0; i < n; ++i) u[i] = u_lower(t, a[i]);
    const auto values = solve_p1_p2(a, m, u);
    worst = std::max(worst, std::abs(values.p1 - values.p2));
  }
  const Technology t = rc_test::canonical();
  const SingleAgentSolution sol = critical_slope(t);
  std::vector<double> grid(200);
  for (int i = 0; i < 200; ++i) grid[i] = sol.alpha_star * i / 199.0;
  const double p2 = solve_p1_p2(t, grid, sol.cdf).p2;
  return {worst <= 1e-6 && p2 >= sol.value - 1e-2,
          fmt::format("50 instances, max |P1 - P2| {:.1e}; P2 on discretized G* {:.6f} vs V {:.6f}",
                      worst, p2, sol.value)};
}

Verdict team() {
  std::mt19937_64 rng(42);
  double worst_grid = 0.0;
  bool grid_ok = true;
  bool nash_ok = true;
  bool p3_ok = true;
  double worst_integrand = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TeamTechnology tech = rc_test::random_team(rng, 2 + trial % 2);
    const TeamSolution sol = team_critical_slope(tech);
    const double grid = rc_test::grid_search(tech, 1e-2);
    worst_grid = std::max(worst_grid, std::abs(sol.value - grid));
    grid_ok = grid_ok && sol.value >= grid - 1e-9 && sol.value - grid <= 1e-3;
    nash_ok = nash_ok && nash_check(tech, sol.alpha_star).is_nash &&
              nash_check(tech, random_simplex_point(tech.agents(), rng)).is_nash;
    if (!sol.degenerate()) {
      const P3Report p3 = p3_upper_check(tech, sol);
      p3_ok = p3_ok && p3.pass();
      worst_integrand = std::max(worst_integrand, p3.max_integrand_error);
    }
  }

  std::mt19937_64 single_rng(7);
  double worst_single = 0.0;
  bool single_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    const auto mc = rc_test::random_mean_costs(single_rng);
    std::vector<double> costs = {0.0};
    std::vector<OutcomeDist> dists = {OutcomeDist::point_mass(0.0)};
    for (const auto& [e, c] : mc) {
      costs.push_back(c);
      dists.push_back(OutcomeDist::point_mass(e));
    }
    const TeamSolution ts = team_critical_slope(TeamTechnology({costs}, dists));
    const SingleAgentSolution ss = critical_slope(rc_test::point_technology(mc));
    worst_single = std::max({worst_single, std::abs(ts.value - ss.value),
                             std::abs(ts.s_star - ss.alpha_star)});
    single_ok = single_ok && close(ts.value, ss.value, 1e-12) && close(ts.s_star, ss.alpha_star, 1e-12);
  }
  return {grid_ok && nash_ok && p3_ok && single_ok,
          fmt::format("grid diff {:.1e}, n=1 diff {:.1e}, Nash {}, P3 {} (integrand error {:.1e})",
                      worst_grid, worst_single, nash_ok ? "ok" : "violated",
                      p3_ok ? "ok" : "violated", worst_integrand)};
}

Verdict advantage() {
  bool monotone = true;
  double previous = 0.0;
  for (int k = 1; k <= 99; ++k) {
    const double r = advantage_ratio(k / 100.0);
    monotone = monotone && r >= previous;
    previous = r;
  }
  const double mid = advantage_ratio(0.5);
  const double high = advantage_ratio(0.99);
  const double low = advantage_ratio(0.01);
  return {monotone && std::abs(mid - 2.176) <= 0.01 && high >= 50.0 && low <= 1.1,
          fmt::format("nondecreasing {}, ratio(0.01) {:.4f}, ratio(0.5) {:.4f}, ratio(0.99) {:.3f}",
                      monotone ? "yes" : "no", low, mid, high)};
}

Verdict lagrangian() {
  std::mt19937_64 rng(21);
  int exact = 0;
  int scalar_ok = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto mc = rc_test::random_mean_costs(rng);
    const Technology tech = rc_test::point_technology(mc);
    const SingleOutcomeLagrangian lag = single_outcome_lagrangian(tech);
    if (lag.payoff == deterministic_optimum(tech).payoff) ++exact;
    const auto actions = as_vector_actions(tech);
    const ConvexBound zero = ConvexBound::zero(1);
    const MultiOutcomeLambda lambda = multi_outcome_lambda(actions, zero);
    const MultiOutcomeContract w = multi_outcome_contract(actions, lambda, zero);
    if (close(lambda.lambda_star, lag.lambda_star, 1e-12) && close(w.coefficient(0), lag.slope, 1e-12)) {
      ++scalar_ok;
    }
  }

  std::mt19937_64 multi_rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_bound = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<AffinePiece> pieces = {{{0.0, 0.0}, 0.0}};
    for (int j = 0; j < 2; ++j) {
      pieces.push_back({{0.3 * unit(multi_rng), unit(multi_rng) - 0.3}, -0.5 * unit(multi_rng)});
    }
    const ConvexBound b(pieces);
    std::vector<MultiOutcomeAction> actions;
    for (int a = 0; a < 3; ++a) {
      std::vector<VectorOutcome> support = {
          {{3.0 * unit(multi_rng), 2.0 * unit(multi_rng)}, 0.5},
          {{3.0 * unit(multi_rng), 2.0 * unit(multi_rng)}, 0.5}};
      const MultiOutcomeAction probe(support, 0.0);
      actions.emplace_back(support, b(probe.mean()) + 0.05 + unit(multi_rng));
    }
    const MultiOutcomeLambda lambda = multi_outcome_lambda(actions, b);
    const MultiOutcomeContract w = multi_outcome_contract(actions, lambda, b);
    const double objective =
        multi_outcome_objective(actions[lambda.witness_action], b, lambda.lambda_star);
    worst_bound = std::max(worst_bound, std::abs(w.payoff_bound - objective));
  }
  return {exact == 200 && scalar_ok == 200 && worst_bound <= 1e-9,
          fmt::format("deterministic optimum matched exactly {}/200, k=1 reduction {}/200, max |bound - objective| {:.1e}",
                      exact, scalar_ok, worst_bound)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"closed form", closed_form},
      {"degenerate case", degenerate},
      {"upper bound", upper_bound},
      {"lower bound", lower_bound},
      {"LP cross-check", lp_cross_check},
      {"Myerson reduction", myerson},
      {"team", team},
      {"advantage ratio", advantage},
      {"Lagrangian", lagrangian},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, fmt::format("threw: {}", e.what())};
    }
    if (!outcome.pass) ++failures;
    fmt::print("{} criterion {} ({}): {}\n", outcome.pass ? "PASS" : "FAIL", i + 1,
               criteria[i].first, outcome.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
