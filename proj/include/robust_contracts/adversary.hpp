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

// Worst-case technology for a known technology and numerical certification
// of both sides of the optimal randomized payoff.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "robust_contracts/contract_core.hpp"
#include "robust_contracts/single_agent.hpp"

namespace robust_contracts {

inline constexpr std::size_t kDefaultAdversarySlopes = 2000;
inline constexpr double kUpperBoundTolerance = 1e-3;
inline constexpr double kLowerBoundTolerance = 1e-9;
inline constexpr double kContainmentTolerance = 1e-9;
inline constexpr double kTieSensitivityThreshold = 1e-6;

// Parametric worst case: for slope alpha in (0, alpha_bar] the agent can
// produce mean e*(alpha) = V / (1 - alpha) at cost c*(alpha); below e*(0) = V
// every mean is free.
class AdversaryTechnology {
 public:
  AdversaryTechnology(double alpha_star, double value, double max_mean,
                      OutcomeDist top_distribution);

  double alpha_star() const { return alpha_star_; }
  double value() const { return value_; }
  double alpha_bar() const { return alpha_bar_; }
  double max_mean() const { return max_mean_; }
  // Max-mean known distribution; every adversary action mixes it with a
  // point mass at 0.
  const OutcomeDist& top_distribution() const { return top_; }

  double e_star(double alpha) const;
  double c_star(double alpha) const;
  // Slope at which e* reaches the given mean (mean >= V).
  double e_star_inverse(double mean) const;

 private:
  double alpha_star_;
  double value_;
  double max_mean_;
  double alpha_bar_;
  OutcomeDist top_;
};

double e_star(double alpha, const SingleAgentSolution& sol);
double c_star(double alpha, const SingleAgentSolution& sol);

/// Builds the worst-case family and checks that it contains the known
/// technology. Throws ValidationError when alpha* = 0 and
/// InternalConsistencyError when a known action falls outside the family.
AdversaryTechnology build_adversary(const Technology& known,
                                    const SingleAgentSolution& sol);

// One finite member of the adversary family: weight on the distribution of
// known action `source` (rest on 0) and cost.
struct MixtureAction {
  std::size_t source = 0;
  double weight = 0.0;
  double cost = 0.0;
};

// Finite slice of the adversary technology used for contract evaluation. For
// every known distribution F and every slope a on a uniform grid over
// [0, alpha_bar] (plus alpha* and the slope where e*(a) = E[F]) with
// e*(a) <= E[F], the mixture of F and 0 with mean e*(a) at cost c*(a); plus
// the null action and the known actions.
class DiscreteAdversary {
 public:
  DiscreteAdversary(const AdversaryTechnology& adversary, const Technology& known,
                    std::size_t slope_points = kDefaultAdversarySlopes);

  const AdversaryTechnology& adversary() const { return adversary_; }
  std::span<const MixtureAction> mixtures() const { return mixtures_; }
  // Outcomes a contract must price to be evaluated here.
  const std::vector<double>& outcome_grid() const { return outcome_grid_; }

  // Principal payoff when the agent best-responds inside this technology.
  double best_payoff(const TabularContract& w, TieBreak tie) const;

 private:
  AdversaryTechnology adversary_;
  Technology known_;
  std::vector<MixtureAction> mixtures_;
  std::vector<double> outcome_grid_;
};

/// Principal payoff of w against the discretized adversary with best-case
/// tie-breaking. Throws DomainMismatchError when w misses an outcome.
double adversary_best_payoff(const DiscreteAdversary& adversary,
                             const TabularContract& w);

struct UpperBoundReport {
  double max_payoff = -std::numeric_limits<double>::infinity();
  double bound = 0.0;
  bool pass = true;
  std::optional<std::size_t> best_contract;
  // Contracts whose payoff moves by more than kTieSensitivityThreshold when
  // the agent breaks ties against the principal instead.
  std::size_t tie_sensitive = 0;
  std::size_t contracts = 0;
};

UpperBoundReport verify_upper_bound(const Technology& known,
                                    std::span<const TabularContract> contracts,
                                    std::size_t slope_points = kDefaultAdversarySlopes,
                                    double tolerance = kUpperBoundTolerance);

/// Random limited-liability contracts on the known outcome grid, payments
/// uniform in [0, max outcome], followed by the linear contract with slope
/// alpha*.
std::vector<TabularContract> random_contract_grid(const Technology& known,
                                                  double alpha_star,
                                                  std::size_t count,
                                                  std::uint64_t seed);

/// Exact expected payoff of the randomized contract G* when the real
/// technology is `actual` and the agent breaks ties against the principal.
/// Integrates the piecewise-constant best-response mean over [0, alpha*].
double randomized_payoff_exact(const Technology& actual,
                               const SingleAgentSolution& sol);

/// Known technology plus 1..10 random actions with means at most 3x the
/// largest known mean.
Technology random_superset(const Technology& known, std::mt19937_64& rng);

struct LowerBoundReport {
  double min_payoff = std::numeric_limits<double>::infinity();
  double bound = 0.0;
  bool pass = true;
  std::optional<std::size_t> worst_trial;
  std::size_t trials = 0;
};

LowerBoundReport verify_lower_bound(const Technology& known, std::size_t trials,
                                    std::uint64_t seed,
                                    double tolerance = kLowerBoundTolerance);

}  // namespace robust_contracts
