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

// Teams of agents with separable costs paid by a vector of linear slopes:
// critical slope vector, its randomized contract along the segment to the
// origin, equilibrium checks and the deterministic baseline.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "robust_contracts/contract_core.hpp"

namespace robust_contracts {

inline constexpr std::size_t kMaxTeamProfiles = 1'000'000;
inline constexpr double kNashTolerance = 1e-9;
inline constexpr double kSelectionTolerance = 1e-6;
inline constexpr double kTeamPayoffTolerance = 1e-4;
inline constexpr double kP3Tolerance = 1e-6;

/// Known team technology. Agent i picks one of costs[i].size() actions and
/// pays costs[i][a_i]; joint profiles are indexed in mixed radix with agent 0
/// most significant, and dists[profile] is the outcome distribution.
class TeamTechnology {
 public:
  /// Throws ValidationError on negative costs, a profile-count mismatch, more
  /// than kMaxTeamProfiles profiles, no zero-cost profile, or no productive
  /// profile.
  TeamTechnology(std::vector<std::vector<double>> costs, std::vector<OutcomeDist> dists);

  std::size_t agents() const { return costs_.size(); }
  std::size_t actions(std::size_t agent) const { return costs_.at(agent).size(); }
  std::size_t profiles() const { return dists_.size(); }
  double cost(std::size_t agent, std::size_t action) const { return costs_.at(agent).at(action); }
  const OutcomeDist& dist(std::size_t profile) const { return dists_.at(profile); }
  double mean(std::size_t profile) const { return dists_.at(profile).mean(); }
  // Sum over agents of sqrt(cost).
  double root_cost(std::size_t profile) const { return root_cost_.at(profile); }
  bool zero_cost(std::size_t profile) const { return root_cost_.at(profile) == 0.0; }

  std::vector<std::size_t> decode(std::size_t profile) const;
  std::size_t encode(std::span<const std::size_t> actions) const;
  // Profile with agent's action replaced.
  std::size_t deviate(std::size_t profile, std::size_t agent, std::size_t action) const;

 private:
  std::vector<std::vector<double>> costs_;
  std::vector<OutcomeDist> dists_;
  std::vector<double> root_cost_;
  std::vector<std::size_t> stride_;
};

/// E[y] - sum_i c_i / alpha_i for one profile, with c/0 = +inf when c > 0
/// and 0 when c = 0.
double team_profile_value(const TeamTechnology& tech, std::size_t profile,
                          std::span<const double> alpha);

/// Max over profiles of team_profile_value; may be negative.
double team_u_lower(const TeamTechnology& tech, std::span<const double> alpha);

struct TeamSolution {
  std::vector<double> alpha_star;
  double s_star = 0.0;
  double value = 0.0;
  RandomizedLinearContract cdf = RandomizedLinearContract::team(0.0);
  std::size_t witness_profile = 0;
  bool degenerate() const { return s_star == 0.0; }
};

/// Maximizes u(alpha) S / -ln(1 - S), S = sum alpha_i, over the simplex. Each
/// profile's best allocation at total S is alpha_i = S sqrt(c_i) / K with
/// K = sum sqrt(c_i), which reduces it to a single agent with cost K^2.
TeamSolution team_critical_slope(const TeamTechnology& tech);

RandomizedLinearContract team_cdf(const TeamSolution& sol);

/// Profile chosen at slopes alpha: the maximizer of team_profile_value, ties
/// within kNashTolerance going to the lower mean and then the lower index.
std::size_t team_choice(const TeamTechnology& tech, std::span<const double> alpha);

struct TeamPayoffReport {
  double value = 0.0;      // u(alpha*) S* / -ln(1 - S*)
  double integrated = 0.0; // numerical integral along the segment
  bool pass = true;
};

/// Expected payoff of the team contract, with a numerical integration of the
/// principal's payoff (1 - S)(u + sum alpha_i du/dalpha_i) dG over `points`
/// midpoints of the segment, du/dalpha_i = c_i / alpha_i^2 on the region of
/// each midpoint.
TeamPayoffReport team_expected_payoff(const TeamTechnology& tech, const TeamSolution& sol,
                                      std::size_t points = 100'000);

/// Max over profiles of (sqrt(E) - K)^2, clamped at 0.
double team_deterministic_baseline(const TeamTechnology& tech);

struct NashReport {
  std::size_t profile = 0;
  bool is_nash = true;
  double max_gain = 0.0;  // largest unilateral deviation gain
  std::vector<std::size_t> equilibria;  // every pure equilibrium
  double chosen_payoff = 0.0;
  double best_equilibrium_payoff = 0.0;
  // Some other pure equilibrium changes the principal's payoff by more than
  // kSelectionTolerance.
  bool selection_matters = false;
};

/// Checks that team_choice(alpha) is a pure Nash equilibrium of the game with
/// payments alpha_i y and lists all pure equilibria.
NashReport nash_check(const TeamTechnology& tech, std::span<const double> alpha);

struct P3Report {
  bool dominates = true;
  bool constant = true;
  double max_shortfall = 0.0;        // max of u_lower - u*
  double max_integrand_error = 0.0;  // max |integrand - V|
  double binding_gap = 0.0;          // |u*(alpha*) - u_lower(alpha*)|
  std::size_t points = 0;
  bool pass() const { return dominates && constant; }
};

/// Checks that u*(alpha) = V -ln(1 - S) / S dominates u_lower on a simplex
/// grid of the given resolution (random points when the grid is too large)
/// and that its payoff integrand is identically V at random simplex points.
P3Report p3_upper_check(const TeamTechnology& tech, const TeamSolution& sol,
                        double resolution = 1e-2, std::size_t random_points = 1000,
                        std::uint64_t seed = 42);

/// Uniform point on {alpha >= 0, sum alpha <= 1}.
std::vector<double> random_simplex_point(std::size_t n, std::mt19937_64& rng);

}  // namespace robust_contracts
