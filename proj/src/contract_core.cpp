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

#include "robust_contracts/contract_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

namespace robust_contracts {

OutcomeDist::OutcomeDist(std::vector<Outcome> support)
    : support_(std::move(support)) {
  if (support_.empty()) {
    throw ValidationError("outcome distribution has empty support");
  }
  double total = 0.0;
  for (const Outcome& o : support_) {
    if (!std::isfinite(o.value) || o.value < 0.0) {
      throw ValidationError(
          fmt::format("outcome {} must be finite and nonnegative", o.value));
    }
    if (!std::isfinite(o.prob) || o.prob < 0.0 || o.prob > 1.0) {
      throw ValidationError(
          fmt::format("probability {} must lie in [0, 1]", o.prob));
    }
    total += o.prob;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    throw ValidationError(
        fmt::format("probabilities sum to {:.15g}, expected 1", total));
  }
  std::sort(support_.begin(), support_.end(),
            [](const Outcome& a, const Outcome& b) { return a.value < b.value; });
  for (std::size_t i = 1; i < support_.size(); ++i) {
    if (support_[i].value == support_[i - 1].value) {
      throw ValidationError(
          fmt::format("outcome {} listed twice", support_[i].value));
    }
  }
  for (const Outcome& o : support_) mean_ += o.value * o.prob;
}

OutcomeDist OutcomeDist::point_mass(double value) {
  return OutcomeDist({{value, 1.0}});
}

bool OutcomeDist::is_point_mass_at_zero() const {
  for (const Outcome& o : support_) {
    if (o.value != 0.0 && o.prob > 0.0) return false;
  }
  return true;
}

double expected_outcome(const OutcomeDist& dist) { return dist.mean(); }

Action::Action(OutcomeDist dist, double cost)
    : dist_(std::move(dist)), cost_(cost) {
  if (!std::isfinite(cost_) || cost_ < 0.0) {
    throw ValidationError(
        fmt::format("action cost {} must be finite and nonnegative", cost_));
  }
}

Action Action::null_action() { return Action(OutcomeDist::point_mass(0.0), 0.0); }

Technology::Technology(std::vector<Action> actions)
    : actions_(std::move(actions)) {
  auto null_it = std::find_if(actions_.begin(), actions_.end(),
                              [](const Action& a) { return a.is_null(); });
  if (null_it == actions_.end()) {
    actions_.push_back(Action::null_action());
    null_index_ = actions_.size() - 1;
  } else {
    null_index_ = static_cast<std::size_t>(null_it - actions_.begin());
  }
  bool nontrivial = std::any_of(actions_.begin(), actions_.end(),
                                [](const Action& a) { return a.mean() - a.cost() > 0.0; });
  if (!nontrivial) {
    throw ValidationError(
        "technology needs at least one non-trivial action (E[y] - cost > 0)");
  }
}

double Technology::max_mean() const {
  double best = 0.0;
  for (const Action& a : actions_) best = std::max(best, a.mean());
  return best;
}

std::vector<double> Technology::outcome_grid() const {
  std::vector<double> grid;
  for (const Action& a : actions_) {
    for (const Outcome& o : a.dist().support()) grid.push_back(o.value);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

LinearContract::LinearContract(double slope) : slope_(slope) {
  if (!(slope_ >= 0.0 && slope_ <= 1.0)) {
    throw ValidationError(fmt::format("slope {} outside [0, 1]", slope_));
  }
}

TabularContract::TabularContract(std::map<double, double> payments)
    : payments_(std::move(payments)) {
  for (const auto& [y, w] : payments_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError(fmt::format(
          "payment {} at outcome {} violates limited liability", w, y));
    }
  }
}

TabularContract TabularContract::from_linear(const LinearContract& w,
                                             std::span<const double> outcome_grid) {
  std::map<double, double> table;
  for (double y : outcome_grid) table[y] = w.payment(y);
  return TabularContract(std::move(table));
}

bool TabularContract::covers(double outcome) const {
  return payments_.contains(outcome);
}

double TabularContract::payment(double outcome) const {
  auto it = payments_.find(outcome);
  if (it == payments_.end()) {
    throw DomainMismatchError(
        fmt::format("contract has no payment for outcome {}", outcome));
  }
  return it->second;
}

RandomizedLinearContract::RandomizedLinearContract(CdfKind kind, double critical)
    : kind_(kind), critical_(critical) {
  if (!(critical_ >= 0.0 && critical_ < 1.0)) {
    throw ValidationError(
        fmt::format("critical slope {} outside [0, 1)", critical_));
  }
}

RandomizedLinearContract RandomizedLinearContract::single_agent(double alpha_star) {
  return RandomizedLinearContract(CdfKind::kSingleAgent, alpha_star);
}

RandomizedLinearContract RandomizedLinearContract::team(double total_slope) {
  return RandomizedLinearContract(CdfKind::kTeam, total_slope);
}

double RandomizedLinearContract::upper_support() const {
  if (is_point_mass()) return 0.0;
  return kind_ == CdfKind::kSingleAgent ? critical_ : 1.0;
}

double RandomizedLinearContract::cdf(double x) const {
  if (x < 0.0) return 0.0;
  if (is_point_mass() || x >= upper_support()) return 1.0;
  // Single agent: ln(1-x)/ln(1-a). Team: ln(1-x*s)/ln(1-s).
  const double scaled = kind_ == CdfKind::kSingleAgent ? x : x * critical_;
  return std::log1p(-scaled) / std::log1p(-critical_);
}

double RandomizedLinearContract::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw ValidationError(fmt::format("quantile level {} outside [0, 1]", u));
  }
  if (is_point_mass()) return 0.0;
  if (u == 1.0) return upper_support();
  const double scaled = -std::expm1(u * std::log1p(-critical_));
  return kind_ == CdfKind::kSingleAgent ? scaled : scaled / critical_;
}

double payment(const Contract& w, double outcome) {
  return std::visit([outcome](const auto& c) { return c.payment(outcome); }, w);
}

double expected_payment(const Contract& w, const OutcomeDist& dist) {
  double total = 0.0;
  for (const Outcome& o : dist.support()) {
    if (o.prob == 0.0) continue;
    total += o.prob * payment(w, o.value);
  }
  return total;
}

double agent_utility(const Contract& w, const Action& a) {
  return expected_payment(w, a.dist()) - a.cost();
}

double principal_payoff(const Contract& w, const Action& a) {
  return a.mean() - expected_payment(w, a.dist());
}

BestResponse best_response(const Contract& w, const Technology& tech,
                           TieBreak tie) {
  std::vector<double> utility(tech.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tech.size(); ++i) {
    utility[i] = agent_utility(w, tech[i]);
    top = std::max(top, utility[i]);
  }
  BestResponse best;
  bool found = false;
  for (std::size_t i = 0; i < tech.size(); ++i) {
    if (utility[i] < top - kUtilityTieTolerance) continue;
    const double payoff = principal_payoff(w, tech[i]);
    const bool better = tie == TieBreak::kBestForPrincipal
                            ? payoff > best.principal_payoff
                            : payoff < best.principal_payoff;
    if (!found || better) {
      best = {i, utility[i], payoff};
      found = true;
    }
  }
  return best;
}

}  // namespace robust_contracts
