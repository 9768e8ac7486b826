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

#include "robust_contracts/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

namespace robust_contracts {
namespace {

void require_slope(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::domain_error(
        fmt::format("adversary curve is singular at slope {} (need [0, 1))", alpha));
  }
}

void require_nondegenerate(const SingleAgentSolution& sol) {
  if (sol.degenerate()) {
    throw ValidationError(
        "worst-case technology needs alpha* > 0; the degenerate case is "
        "settled by the zero-slope contract");
  }
}

std::size_t top_action(const Technology& known) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < known.size(); ++i) {
    if (known[i].mean() > known[best].mean()) best = i;
  }
  return best;
}

}  // namespace

AdversaryTechnology::AdversaryTechnology(double alpha_star, double value,
                                         double max_mean,
                                         OutcomeDist top_distribution)
    : alpha_star_(alpha_star),
      value_(value),
      max_mean_(max_mean),
      alpha_bar_(1.0 - value / max_mean),
      top_(std::move(top_distribution)) {}

double AdversaryTechnology::e_star(double alpha) const {
  require_slope(alpha);
  return value_ / (1.0 - alpha);
}

double AdversaryTechnology::c_star(double alpha) const {
  require_slope(alpha);
  // alpha e*(alpha) minus the integral of e* over [0, alpha], which is
  // V (-ln(1 - alpha)).
  return alpha * value_ / (1.0 - alpha) + value_ * std::log1p(-alpha);
}

double AdversaryTechnology::e_star_inverse(double mean) const {
  return 1.0 - value_ / mean;
}

double e_star(double alpha, const SingleAgentSolution& sol) {
  require_nondegenerate(sol);
  require_slope(alpha);
  return sol.value / (1.0 - alpha);
}

double c_star(double alpha, const SingleAgentSolution& sol) {
  require_nondegenerate(sol);
  require_slope(alpha);
  return alpha * sol.value / (1.0 - alpha) + sol.value * std::log1p(-alpha);
}

AdversaryTechnology build_adversary(const Technology& known,
                                    const SingleAgentSolution& sol) {
  require_nondegenerate(sol);
  const std::size_t top = top_action(known);
  AdversaryTechnology adversary(sol.alpha_star, sol.value, known[top].mean(),
                                known[top].dist());
  for (std::size_t i = 0; i < known.size(); ++i) {
    const Action& a = known[i];
    if (a.mean() <= adversary.e_star(0.0)) continue;
    const double alpha0 = adversary.e_star_inverse(a.mean());
    const double floor_cost = adversary.c_star(alpha0);
    if (a.cost() < floor_cost - kContainmentTolerance) {
      throw InternalConsistencyError(fmt::format(
          "known action {} (mean {}, cost {}) lies below the worst-case cost "
          "curve c*({}) = {}",
          i, a.mean(), a.cost(), alpha0, floor_cost));
    }
  }
  return adversary;
}

DiscreteAdversary::DiscreteAdversary(const AdversaryTechnology& adversary,
                                     const Technology& known,
                                     std::size_t slope_points)
    : adversary_(adversary), known_(known) {
  if (slope_points < 2) {
    throw ValidationError("adversary slope grid needs at least 2 points");
  }
  const double alpha_bar = adversary_.alpha_bar();
  std::vector<double> slopes;
  slopes.reserve(slope_points + 1);
  for (std::size_t k = 0; k < slope_points; ++k) {
    slopes.push_back(alpha_bar * static_cast<double>(k) /
                     static_cast<double>(slope_points - 1));
  }
  if (adversary_.alpha_star() <= alpha_bar) slopes.push_back(adversary_.alpha_star());
  std::sort(slopes.begin(), slopes.end());
  slopes.erase(std::unique(slopes.begin(), slopes.end()), slopes.end());

  mixtures_.push_back({known_.null_index(), 0.0, 0.0});
  const double value = adversary_.value();
  for (std::size_t i = 0; i < known_.size(); ++i) {
    const double mean = known_[i].mean();
    if (mean <= 0.0) continue;
    const double reach = std::max(0.0, adversary_.e_star_inverse(mean));
    for (double alpha : slopes) {
      if (alpha > reach) break;
      mixtures_.push_back({i, std::min(1.0, value / (1.0 - alpha) / mean),
                           adversary_.c_star(alpha)});
    }
    if (reach > 0.0) mixtures_.push_back({i, 1.0, adversary_.c_star(reach)});
  }

  outcome_grid_ = known_.outcome_grid();
  if (!std::binary_search(outcome_grid_.begin(), outcome_grid_.end(), 0.0)) {
    outcome_grid_.insert(outcome_grid_.begin(), 0.0);
  }
}

double DiscreteAdversary::best_payoff(const TabularContract& w, TieBreak tie) const {
  std::vector<double> wages(known_.size());
  for (std::size_t i = 0; i < known_.size(); ++i) {
    wages[i] = expected_payment(w, known_[i].dist());
  }
  const double zero_wage = w.payment(0.0);

  struct Choice {
    double utility;
    double payoff;
  };
  std::vector<Choice> choices;
  choices.reserve(mixtures_.size() + known_.size());
  for (const MixtureAction& m : mixtures_) {
    const double wage = m.weight * wages[m.source] + (1.0 - m.weight) * zero_wage;
    choices.push_back({wage - m.cost, m.weight * known_[m.source].mean() - wage});
  }
  for (const Action& a : known_.actions()) {
    choices.push_back({agent_utility(w, a), principal_payoff(w, a)});
  }

  double top_utility = -std::numeric_limits<double>::infinity();
  for (const Choice& c : choices) top_utility = std::max(top_utility, c.utility);
  double result = tie == TieBreak::kBestForPrincipal
                      ? -std::numeric_limits<double>::infinity()
                      : std::numeric_limits<double>::infinity();
  for (const Choice& c : choices) {
    if (c.utility < top_utility - kUtilityTieTolerance) continue;
    result = tie == TieBreak::kBestForPrincipal ? std::max(result, c.payoff)
                                                : std::min(result, c.payoff);
  }
  return result;
}

double adversary_best_payoff(const DiscreteAdversary& adversary,
                             const TabularContract& w) {
  return adversary.best_payoff(w, TieBreak::kBestForPrincipal);
}

UpperBoundReport verify_upper_bound(const Technology& known,
                                    std::span<const TabularContract> contracts,
                                    std::size_t slope_points, double tolerance) {
  const SingleAgentSolution sol = critical_slope(known);
  const DiscreteAdversary adversary(build_adversary(known, sol), known, slope_points);

  UpperBoundReport report;
  report.bound = sol.value;
  report.contracts = contracts.size();
  for (std::size_t i = 0; i < contracts.size(); ++i) {
    const double best = adversary.best_payoff(contracts[i], TieBreak::kBestForPrincipal);
    const double worst = adversary.best_payoff(contracts[i], TieBreak::kWorstForPrincipal);
    if (best - worst > kTieSensitivityThreshold) ++report.tie_sensitive;
    if (best > report.max_payoff) {
      report.max_payoff = best;
      report.best_contract = i;
    }
  }
  report.pass = report.max_payoff <= report.bound + tolerance;
  return report;
}

std::vector<TabularContract> random_contract_grid(const Technology& known,
                                                  double alpha_star,
                                                  std::size_t count,
                                                  std::uint64_t seed) {
  std::vector<double> grid = known.outcome_grid();
  if (!std::binary_search(grid.begin(), grid.end(), 0.0)) grid.insert(grid.begin(), 0.0);
  const double top = grid.back();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pay(0.0, top);

  std::vector<TabularContract> contracts;
  contracts.reserve(count + 1);
  for (std::size_t k = 0; k < count; ++k) {
    std::map<double, double> table;
    for (double y : grid) table[y] = pay(rng);
    contracts.emplace_back(std::move(table));
  }
  contracts.push_back(TabularContract::from_linear(LinearContract(alpha_star), grid));
  return contracts;
}

double randomized_payoff_exact(const Technology& actual,
                               const SingleAgentSolution& sol) {
  require_nondegenerate(sol);
  const double alpha_star = sol.alpha_star;
  std::vector<double> cuts = {0.0, alpha_star};
  for (std::size_t i = 0; i < actual.size(); ++i) {
    for (std::size_t j = i + 1; j < actual.size(); ++j) {
      const double de = actual[j].mean() - actual[i].mean();
      if (de == 0.0) continue;
      const double alpha = (actual[j].cost() - actual[i].cost()) / de;
      if (alpha > 0.0 && alpha < alpha_star) cuts.push_back(alpha);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Payoff = int (1 - a) e(a) dG*(a) and (1 - a) dG*(a) = da / (-ln(1 - a*)).
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (hi <= lo) continue;
    const BestResponse br = best_response(LinearContract(0.5 * (lo + hi)), actual,
                                          TieBreak::kWorstForPrincipal);
    integral += actual[br.index].mean() * (hi - lo);
  }
  return integral / -std::log1p(-alpha_star);
}

Technology random_superset(const Technology& known, std::mt19937_64& rng) {
  const double top = 3.0 * known.max_mean();
  std::uniform_int_distribution<int> extra_count(1, 10);
  std::uniform_int_distribution<int> support_size(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Action> actions(known.actions().begin(), known.actions().end());
  const int extra = extra_count(rng);
  for (int k = 0; k < extra; ++k) {
    const int n = support_size(rng);
    std::vector<double> values;
    while (static_cast<int>(values.size()) < n) {
      const double y = top * unit(rng);
      if (std::find(values.begin(), values.end(), y) == values.end()) values.push_back(y);
    }
    std::vector<double> weights(n);
    double total = 0.0;
    for (double& w : weights) total += (w = unit(rng) + 1e-3);
    std::vector<Outcome> support;
    double used = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      const double p = weights[i] / total;
      support.push_back({values[i], p});
      used += p;
    }
    support.push_back({values[n - 1], std::max(0.0, 1.0 - used)});
    const double cost = unit(rng) < 0.1 ? 0.0 : top * unit(rng);
    actions.emplace_back(OutcomeDist(std::move(support)), cost);
  }
  return Technology(std::move(actions));
}

LowerBoundReport verify_lower_bound(const Technology& known, std::size_t trials,
                                    std::uint64_t seed, double tolerance) {
  if (trials == 0) throw ValidationError("lower-bound check needs at least one trial");
  const SingleAgentSolution sol = critical_slope(known);
  require_nondegenerate(sol);

  LowerBoundReport report;
  report.bound = sol.value;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const Technology actual = random_superset(known, rng);
    const double payoff = randomized_payoff_exact(actual, sol);
    if (payoff < report.min_payoff) {
      report.min_payoff = payoff;
      report.worst_trial = t;
    }
  }
  report.pass = report.min_payoff >= report.bound - tolerance;
  return report;
}

}  // namespace robust_contracts
