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

// Domain types for robust contract design: outcome distributions, actions,
// technologies and the contract families used by the solvers.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace robust_contracts {

// Utility ties are resolved inside this absolute band.
inline constexpr double kUtilityTieTolerance = 1e-9;
inline constexpr double kProbabilitySumTolerance = 1e-12;

// Malformed user input (probabilities, costs, slopes, missing null action...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A contract was asked for a payment at an outcome it does not cover.
class DomainMismatchError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A certified identity failed; this always indicates a solver bug.
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Outcome {
  double value = 0.0;
  double prob = 0.0;
};

// Finite distribution over distinct nonnegative outcome values.
class OutcomeDist {
 public:
  explicit OutcomeDist(std::vector<Outcome> support);

  static OutcomeDist point_mass(double value);

  std::span<const Outcome> support() const { return support_; }
  double mean() const { return mean_; }
  bool is_point_mass_at_zero() const;

 private:
  std::vector<Outcome> support_;
  double mean_ = 0.0;
};

double expected_outcome(const OutcomeDist& dist);

class Action {
 public:
  Action(OutcomeDist dist, double cost);

  static Action null_action();

  const OutcomeDist& dist() const { return dist_; }
  double cost() const { return cost_; }
  double mean() const { return dist_.mean(); }
  bool is_null() const { return cost_ == 0.0 && dist_.is_point_mass_at_zero(); }

 private:
  OutcomeDist dist_;
  double cost_;
};

// Finite action set. The null action is appended when the caller omits it,
// so indices of user-supplied actions are preserved.
class Technology {
 public:
  explicit Technology(std::vector<Action> actions);

  std::span<const Action> actions() const { return actions_; }
  const Action& operator[](std::size_t i) const { return actions_.at(i); }
  std::size_t size() const { return actions_.size(); }

  std::size_t null_index() const { return null_index_; }
  double max_mean() const;
  // Sorted union of all support points.
  std::vector<double> outcome_grid() const;

 private:
  std::vector<Action> actions_;
  std::size_t null_index_ = 0;
};

class LinearContract {
 public:
  explicit LinearContract(double slope);
  double slope() const { return slope_; }
  double payment(double outcome) const { return slope_ * outcome; }

 private:
  double slope_;
};

// Explicit outcome -> payment table with limited liability.
class TabularContract {
 public:
  TabularContract() = default;
  explicit TabularContract(std::map<double, double> payments);

  static TabularContract from_linear(const LinearContract& w,
                                     std::span<const double> outcome_grid);

  // Throws DomainMismatchError when the outcome is not in the table.
  double payment(double outcome) const;
  bool covers(double outcome) const;
  const std::map<double, double>& payments() const { return payments_; }

 private:
  std::map<double, double> payments_;
};

using Contract = std::variant<LinearContract, TabularContract>;

enum class TieBreak { kBestForPrincipal, kWorstForPrincipal };

enum class CdfKind { kSingleAgent, kTeam };

// Closed-form distribution over linear contracts. For the single-agent kind
// the variate is the slope itself, supported on [0, alpha_star]. For the team
// kind the variate is the scale beta in [0, 1] applied to the critical slope
// vector, and critical_total() is the total slope sum.
class RandomizedLinearContract {
 public:
  static RandomizedLinearContract single_agent(double alpha_star);
  static RandomizedLinearContract team(double total_slope);

  CdfKind kind() const { return kind_; }
  double critical_total() const { return critical_; }
  bool is_point_mass() const { return critical_ == 0.0; }
  double upper_support() const;

  double cdf(double x) const;
  double quantile(double u) const;

 private:
  RandomizedLinearContract(CdfKind kind, double critical);

  CdfKind kind_;
  double critical_;
};

double payment(const Contract& w, double outcome);
double expected_payment(const Contract& w, const OutcomeDist& dist);

// E_F[w(y)] - c; may be negative.
double agent_utility(const Contract& w, const Action& a);
// E_F[y - w(y)].
double principal_payoff(const Contract& w, const Action& a);

struct BestResponse {
  std::size_t index = 0;
  double agent_utility = 0.0;
  double principal_payoff = 0.0;
};

BestResponse best_response(const Contract& w, const Technology& tech,
                           TieBreak tie);

}  // namespace robust_contracts
