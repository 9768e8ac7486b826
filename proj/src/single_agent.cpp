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

#include "robust_contracts/single_agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

namespace robust_contracts {
namespace {

double stationarity_lhs(double alpha) {
  return alpha + (1.0 - alpha) * std::log1p(-alpha);
}

double max_zero_cost_mean(const Technology& known) {
  double best = 0.0;
  for (const Action& a : known.actions()) {
    if (a.cost() == 0.0) best = std::max(best, a.mean());
  }
  return best;
}

struct Candidate {
  double alpha;
  double value;
  std::size_t witness;
};

// Lowest-index action whose affine piece attains u_lower(alpha).
std::size_t envelope_action(const Technology& known, double alpha) {
  const double top = u_lower(known, alpha);
  for (std::size_t i = 0; i < known.size(); ++i) {
    if (alpha * known[i].mean() - known[i].cost() >= top - kCriticalTieTolerance) {
      return i;
    }
  }
  return known.null_index();
}

}  // namespace

double u_lower(const Technology& known, double alpha) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Action& a : known.actions()) {
    best = std::max(best, alpha * a.mean() - a.cost());
  }
  return best;
}

double ratio_objective(const Technology& known, double alpha) {
  if (alpha <= 0.0) return max_zero_cost_mean(known);
  if (alpha >= kMaxSlope) return 0.0;
  return u_lower(known, alpha) / -std::log1p(-alpha);
}

double solve_stationary_slope(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ValidationError(
        fmt::format("stationarity level {} outside (0, 1)", level));
  }
  double lo = 0.0;
  double hi = kMaxSlope;
  for (int iter = 0; iter < 256; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (stationarity_lhs(mid) < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Return whichever endpoint has the smaller residual.
  return std::abs(stationarity_lhs(lo) - level) <=
                 std::abs(stationarity_lhs(hi) - level)
             ? lo
             : hi;
}

SingleAgentSolution critical_slope(const Technology& known) {
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < known.size(); ++i) {
    const Action& a = known[i];
    if (a.cost() > 0.0 && a.mean() > a.cost()) {
      const double alpha = solve_stationary_slope(a.cost() / a.mean());
      candidates.push_back({alpha, ratio_objective(known, alpha), i});
    }
  }
  // Kinks of u_lower: pairwise crossings that sit on the upper envelope.
  for (std::size_t i = 0; i < known.size(); ++i) {
    for (std::size_t j = i + 1; j < known.size(); ++j) {
      const double de = known[j].mean() - known[i].mean();
      if (de == 0.0) continue;
      const double alpha = (known[j].cost() - known[i].cost()) / de;
      if (!(alpha > 0.0 && alpha < kMaxSlope)) continue;
      const double line = alpha * known[i].mean() - known[i].cost();
      if (line < u_lower(known, alpha) - kCriticalTieTolerance) continue;
      candidates.push_back(
          {alpha, ratio_objective(known, alpha), envelope_action(known, alpha)});
    }
  }

  double best_value = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) best_value = std::max(best_value, c.value);

  SingleAgentSolution sol;
  const double zero_cost_mean = max_zero_cost_mean(known);
  if (candidates.empty() || zero_cost_mean >= best_value - kCriticalTieTolerance) {
    sol.alpha_star = 0.0;
    sol.value = zero_cost_mean;
    for (std::size_t i = 0; i < known.size(); ++i) {
      if (known[i].cost() == 0.0 &&
          known[i].mean() >= zero_cost_mean - kCriticalTieTolerance) {
        sol.witness_action = i;
        break;
      }
    }
    sol.cdf = RandomizedLinearContract::single_agent(0.0);
    return sol;
  }

  const Candidate* chosen = nullptr;
  for (const Candidate& c : candidates) {
    if (c.value < best_value - kCriticalTieTolerance) continue;
    if (chosen == nullptr || c.witness < chosen->witness) chosen = &c;
  }
  sol.alpha_star = chosen->alpha;
  sol.value = u_lower(known, sol.alpha_star) / -std::log1p(-sol.alpha_star);
  sol.witness_action = chosen->witness;
  sol.cdf = RandomizedLinearContract::single_agent(sol.alpha_star);
  return sol;
}

RandomizedLinearContract optimal_cdf(const Technology& known) {
  return critical_slope(known).cdf;
}

double quantile(const RandomizedLinearContract& cdf, double u) {
  return cdf.quantile(u);
}

DeterministicOptimum deterministic_optimum(const Technology& known) {
  DeterministicOptimum best;
  best.payoff = -1.0;
  for (std::size_t i = 0; i < known.size(); ++i) {
    const Action& a = known[i];
    const double gap = std::max(0.0, std::sqrt(a.mean()) - std::sqrt(a.cost()));
    const double payoff = gap * gap;
    if (payoff > best.payoff) {
      best.payoff = payoff;
      best.action = i;
      best.slope = a.mean() > 0.0 ? std::sqrt(a.cost() / a.mean()) : 0.0;
    }
  }
  return best;
}

double advantage_ratio(double c0) {
  if (!(c0 > 0.0 && c0 < 1.0)) {
    throw ValidationError(fmt::format("cost {} outside (0, 1)", c0));
  }
  const double alpha = solve_stationary_slope(c0);
  const double gap = 1.0 - std::sqrt(c0);
  return (1.0 - alpha) / (gap * gap);
}

}  // namespace robust_contracts
