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

#include "robust_contracts/team.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "robust_contracts/single_agent.hpp"

namespace robust_contracts {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_dimension(const TeamTechnology& tech, std::span<const double> alpha) {
  if (alpha.size() != tech.agents()) {
    throw ValidationError(fmt::format("slope vector has {} entries for {} agents", alpha.size(),
                                      tech.agents()));
  }
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a)) {
      throw ValidationError(fmt::format("slope {} is not a finite nonnegative value", a));
    }
  }
}

double u_star(double value, double total) {
  if (total <= 0.0) return value;
  return value * -std::log1p(-total) / total;
}

}  // namespace

TeamTechnology::TeamTechnology(std::vector<std::vector<double>> costs,
                               std::vector<OutcomeDist> dists)
    : costs_(std::move(costs)), dists_(std::move(dists)) {
  if (costs_.empty()) throw ValidationError("team technology needs at least one agent");
  double count = 1.0;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (costs_[i].empty()) throw ValidationError(fmt::format("agent {} has no actions", i));
    for (double c : costs_[i]) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw ValidationError(fmt::format("agent {} has invalid cost {}", i, c));
      }
    }
    count *= static_cast<double>(costs_[i].size());
  }
  if (count > static_cast<double>(kMaxTeamProfiles)) {
    throw ValidationError(fmt::format("{} joint profiles exceed the limit of {}", count,
                                      kMaxTeamProfiles));
  }
  if (static_cast<double>(dists_.size()) != count) {
    throw ValidationError(fmt::format("expected {} profile distributions, got {}", count,
                                      dists_.size()));
  }
  stride_.assign(costs_.size(), 1);
  for (std::size_t i = costs_.size() - 1; i-- > 0;) {
    stride_[i] = stride_[i + 1] * costs_[i + 1].size();
  }
  root_cost_.resize(dists_.size());
  bool has_zero_cost = false;
  bool productive = false;
  for (std::size_t p = 0; p < dists_.size(); ++p) {
    const auto acts = decode(p);
    double k = 0.0;
    for (std::size_t i = 0; i < acts.size(); ++i) k += std::sqrt(costs_[i][acts[i]]);
    root_cost_[p] = k;
    has_zero_cost = has_zero_cost || k == 0.0;
    productive = productive || dists_[p].mean() > k * k;
  }
  if (!has_zero_cost) {
    throw ValidationError("team technology needs a profile in which every agent's cost is 0");
  }
  if (!productive) {
    throw ValidationError(
        "team technology is not productive: no profile has expected outcome above "
        "(sum of sqrt costs)^2, so no slopes with total at most 1 give positive utility");
  }
}

std::vector<std::size_t> TeamTechnology::decode(std::size_t profile) const {
  if (profile >= dists_.size()) throw std::out_of_range("profile index out of range");
  std::vector<std::size_t> acts(costs_.size());
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    acts[i] = (profile / stride_[i]) % costs_[i].size();
  }
  return acts;
}

std::size_t TeamTechnology::encode(std::span<const std::size_t> actions) const {
  if (actions.size() != costs_.size()) throw ValidationError("action vector has wrong length");
  std::size_t profile = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] >= costs_[i].size()) throw std::out_of_range("action index out of range");
    profile += actions[i] * stride_[i];
  }
  return profile;
}

std::size_t TeamTechnology::deviate(std::size_t profile, std::size_t agent,
                                    std::size_t action) const {
  const std::size_t current = (profile / stride_[agent]) % costs_[agent].size();
  return profile - current * stride_[agent] + action * stride_[agent];
}

double team_profile_value(const TeamTechnology& tech, std::size_t profile,
                          std::span<const double> alpha) {
  const auto acts = tech.decode(profile);
  double v = tech.mean(profile);
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const double c = tech.cost(i, acts[i]);
    if (c == 0.0) continue;
    if (alpha[i] == 0.0) return kNegInf;
    v -= c / alpha[i];
  }
  return v;
}

double team_u_lower(const TeamTechnology& tech, std::span<const double> alpha) {
  require_dimension(tech, alpha);
  double best = kNegInf;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    best = std::max(best, team_profile_value(tech, p, alpha));
  }
  return best;
}

TeamSolution team_critical_slope(const TeamTechnology& tech) {
  double zero_cost_mean = 0.0;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    if (tech.zero_cost(p)) zero_cost_mean = std::max(zero_cost_mean, tech.mean(p));
  }

  double best_value = kNegInf;
  std::size_t best_profile = 0;
  double best_s = 0.0;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    const double k = tech.root_cost(p);
    const double e = tech.mean(p);
    if (k == 0.0 || e <= k * k) continue;
    const double s = solve_stationary_slope(k * k / e);
    const double v = (s * e - k * k) / -std::log1p(-s);
    if (v > best_value + kCriticalTieTolerance) {
      best_value = v;
      best_profile = p;
      best_s = s;
    }
  }

  TeamSolution sol;
  sol.alpha_star.assign(tech.agents(), 0.0);
  if (best_value == kNegInf || zero_cost_mean >= best_value - kCriticalTieTolerance) {
    sol.value = zero_cost_mean;
    for (std::size_t p = 0; p < tech.profiles(); ++p) {
      if (tech.zero_cost(p) && tech.mean(p) >= zero_cost_mean - kCriticalTieTolerance) {
        sol.witness_profile = p;
        break;
      }
    }
    return sol;
  }
  const auto acts = tech.decode(best_profile);
  const double k = tech.root_cost(best_profile);
  for (std::size_t i = 0; i < acts.size(); ++i) {
    sol.alpha_star[i] = best_s * std::sqrt(tech.cost(i, acts[i])) / k;
  }
  double total = 0.0;
  for (double a : sol.alpha_star) total += a;
  sol.s_star = total;
  sol.witness_profile = best_profile;
  sol.value = team_u_lower(tech, sol.alpha_star) * total / -std::log1p(-total);
  sol.cdf = RandomizedLinearContract::team(total);
  return sol;
}

RandomizedLinearContract team_cdf(const TeamSolution& sol) { return sol.cdf; }

std::size_t team_choice(const TeamTechnology& tech, std::span<const double> alpha) {
  require_dimension(tech, alpha);
  std::vector<double> values(tech.profiles());
  double top = kNegInf;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    values[p] = team_profile_value(tech, p, alpha);
    top = std::max(top, values[p]);
  }
  std::size_t chosen = tech.profiles();
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    if (values[p] < top - kNashTolerance) continue;
    if (chosen == tech.profiles() || tech.mean(p) < tech.mean(chosen)) chosen = p;
  }
  return chosen;
}

TeamPayoffReport team_expected_payoff(const TeamTechnology& tech, const TeamSolution& sol,
                                      std::size_t points) {
  TeamPayoffReport report;
  report.value = sol.value;
  if (sol.degenerate()) {
    report.integrated = sol.value;
    return report;
  }
  if (points == 0) throw ValidationError("integration needs at least one point");
  const double s = sol.s_star;
  const double log_term = -std::log1p(-s);
  const std::size_t n = tech.agents();
  std::vector<double> alpha(n);
  double total = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double beta = (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = beta * sol.alpha_star[i];
    const std::size_t p = team_choice(tech, alpha);
    const auto acts = tech.decode(p);
    const double u = team_u_lower(tech, alpha);
    double slope_term = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = tech.cost(i, acts[i]);
      if (c > 0.0) slope_term += c / (alpha[i] * alpha[i]) * alpha[i];
    }
    const double density = s / (log_term * (1.0 - beta * s));
    total += (1.0 - beta * s) * (u + slope_term) * density;
  }
  report.integrated = total / static_cast<double>(points);
  report.pass = std::abs(report.integrated - report.value) <= kTeamPayoffTolerance;
  return report;
}

double team_deterministic_baseline(const TeamTechnology& tech) {
  double best = 0.0;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    const double gap = std::sqrt(tech.mean(p)) - tech.root_cost(p);
    if (gap > 0.0) best = std::max(best, gap * gap);
  }
  return best;
}

NashReport nash_check(const TeamTechnology& tech, std::span<const double> alpha) {
  const std::size_t chosen = team_choice(tech, alpha);
  double total = 0.0;
  for (double a : alpha) total += a;

  auto max_gain = [&](std::size_t profile) {
    const auto acts = tech.decode(profile);
    double gain = 0.0;
    for (std::size_t i = 0; i < tech.agents(); ++i) {
      const double own = alpha[i] * tech.mean(profile) - tech.cost(i, acts[i]);
      for (std::size_t b = 0; b < tech.actions(i); ++b) {
        if (b == acts[i]) continue;
        const std::size_t other = tech.deviate(profile, i, b);
        gain = std::max(gain, alpha[i] * tech.mean(other) - tech.cost(i, b) - own);
      }
    }
    return gain;
  };

  NashReport report;
  report.profile = chosen;
  report.max_gain = max_gain(chosen);
  report.is_nash = report.max_gain <= kNashTolerance;
  report.chosen_payoff = (1.0 - total) * tech.mean(chosen);
  report.best_equilibrium_payoff = kNegInf;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    if (max_gain(p) > kNashTolerance) continue;
    report.equilibria.push_back(p);
    const double payoff = (1.0 - total) * tech.mean(p);
    report.best_equilibrium_payoff = std::max(report.best_equilibrium_payoff, payoff);
    if (std::abs(payoff - report.chosen_payoff) > kSelectionTolerance) {
      report.selection_matters = true;
    }
  }
  return report;
}

std::vector<double> random_simplex_point(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> draws(n + 1);
  double total = 0.0;
  for (double& d : draws) total += (d = expo(rng));
  std::vector<double> point(n);
  for (std::size_t i = 0; i < n; ++i) point[i] = draws[i] / total;
  return point;
}

P3Report p3_upper_check(const TeamTechnology& tech, const TeamSolution& sol,
                        double resolution, std::size_t random_points, std::uint64_t seed) {
  if (sol.degenerate()) {
    throw ValidationError("the upper check needs a positive critical total slope");
  }
  if (!(resolution > 0.0 && resolution <= 1.0)) {
    throw ValidationError(fmt::format("grid resolution {} outside (0, 1]", resolution));
  }
  const std::size_t n = tech.agents();
  const double v = sol.value;
  const double slack = 1e-9 * std::max(1.0, v);
  P3Report report;

  auto check_point = [&](std::span<const double> alpha) {
    double total = 0.0;
    for (double a : alpha) total += a;
    if (total >= 1.0) return;
    const double shortfall = team_u_lower(tech, alpha) - u_star(v, total);
    report.max_shortfall = std::max(report.max_shortfall, shortfall);
    ++report.points;
  };

  const std::size_t steps = static_cast<std::size_t>(std::llround(1.0 / resolution));
  // Grid points with sum of indices <= steps: C(steps + n, n).
  double grid_size = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    grid_size *= static_cast<double>(steps + i) / static_cast<double>(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<double> alpha(n);
  if (grid_size <= 500'000.0) {
    std::vector<std::size_t> idx(n, 0);
    std::size_t used = 0;
    while (true) {
      for (std::size_t i = 0; i < n; ++i) alpha[i] = static_cast<double>(idx[i]) * resolution;
      check_point(alpha);
      std::size_t i = n;
      while (i-- > 0) {
        if (used < steps) {
          ++idx[i];
          ++used;
          break;
        }
        used -= idx[i];
        idx[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  } else {
    for (std::size_t k = 0; k < 100'000; ++k) check_point(random_simplex_point(n, rng));
  }
  report.dominates = report.max_shortfall <= slack;

  for (std::size_t k = 0; k < random_points; ++k) {
    const auto point = random_simplex_point(n, rng);
    double total = 0.0;
    for (double a : point) total += a;
    if (total <= 0.0 || total >= 1.0) continue;
    // du*/dalpha_i is the same for every i.
    const double partial =
        v * (1.0 / ((1.0 - total) * total) + std::log1p(-total) / (total * total));
    const double integrand = (1.0 - total) * (u_star(v, total) + partial * total);
    report.max_integrand_error = std::max(report.max_integrand_error, std::abs(integrand - v));
  }
  report.constant = report.max_integrand_error <= kP3Tolerance;
  report.binding_gap =
      std::abs(u_star(v, sol.s_star) - team_u_lower(tech, sol.alpha_star));
  return report;
}

}  // namespace robust_contracts
