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

// Optimal randomized and deterministic linear contracts for one agent.

#pragma once

#include <cstddef>

#include "robust_contracts/contract_core.hpp"

namespace robust_contracts {

// Largest slope fed to ln(1 - alpha); the ratio objective is 0 beyond it.
inline constexpr double kMaxSlope = 1.0 - 1e-15;
// Candidates within this band of the optimum count as ties.
inline constexpr double kCriticalTieTolerance = 1e-10;

struct SingleAgentSolution {
  double alpha_star = 0.0;
  double value = 0.0;
  RandomizedLinearContract cdf = RandomizedLinearContract::single_agent(0.0);
  std::size_t witness_action = 0;

  bool degenerate() const { return alpha_star == 0.0; }
};

struct DeterministicOptimum {
  double slope = 0.0;
  double payoff = 0.0;
  std::size_t action = 0;
};

/// Agent utility guaranteed by the known technology under slope alpha:
/// max over actions of alpha * E[y] - c. Convex, piecewise linear, >= 0.
double u_lower(const Technology& known, double alpha);

/// u_lower(alpha) / (-ln(1 - alpha)). At alpha = 0 this is the limit, the
/// largest mean among zero-cost actions; at alpha >= kMaxSlope it is 0.
double ratio_objective(const Technology& known, double alpha);

/// Root of alpha + (1 - alpha) ln(1 - alpha) = level for level in (0, 1),
/// found by bisection down to floating-point resolution. This is the
/// stationarity condition of (alpha E - c) / (-ln(1 - alpha)) with
/// level = c / E.
double solve_stationary_slope(double level);

/// Maximizer of ratio_objective over [0, 1). Evaluates every per-action
/// stationary point and every kink of u_lower; declares the degenerate case
/// alpha* = 0 when a zero-cost action's mean weakly dominates them.
SingleAgentSolution critical_slope(const Technology& known);

RandomizedLinearContract optimal_cdf(const Technology& known);

double quantile(const RandomizedLinearContract& cdf, double u);

/// Best deterministic contract: max over actions of (sqrt(E) - sqrt(c))^2,
/// paid through the slope sqrt(c*/E*).
DeterministicOptimum deterministic_optimum(const Technology& known);

/// Randomized over deterministic payoff for the single action (E = 1, c0).
/// Throws ValidationError unless 0 < c0 < 1.
double advantage_ratio(double c0);

}  // namespace robust_contracts
