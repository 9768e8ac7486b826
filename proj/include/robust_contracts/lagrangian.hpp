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

// Lagrangian construction of optimal deterministic linear contracts, for a
// scalar outcome and for vector outcomes whose mean is constrained by a
// convex cost bound b.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "robust_contracts/contract_core.hpp"

namespace robust_contracts {

inline constexpr double kLambdaGridMin = 1e-3;
inline constexpr double kLambdaGridMax = 1e3;
inline constexpr std::size_t kLambdaGridPerDecade = 20;
inline constexpr double kLambdaTolerance = 1e-10;
inline constexpr double kLagrangianTolerance = 1e-6;
inline constexpr double kBoundCostTolerance = 1e-9;

// The multiplier is infinite and the optimum is the zero contract, which
// needs best-case tie-breaking.
class CornerCaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct AffinePiece {
  std::vector<double> p;
  double beta = 0.0;
};

/// b(x) = max_j (p_j . x + beta_j).
class ConvexBound {
 public:
  /// Throws ValidationError when there are no pieces, the slope vectors have
  /// different lengths or any coefficient is not finite.
  explicit ConvexBound(std::vector<AffinePiece> pieces);

  /// The zero function on R^k.
  static ConvexBound zero(std::size_t dimension);

  std::size_t dimension() const { return pieces_.front().p.size(); }
  std::span<const AffinePiece> pieces() const { return pieces_; }
  double piece_value(std::size_t j, std::span<const double> x) const;
  double operator()(std::span<const double> x) const;
  // Lowest-index piece attaining the max within 1e-12 (1 + |b(x)|).
  std::size_t active_piece(std::span<const double> x) const;

 private:
  std::vector<AffinePiece> pieces_;
};

struct VectorOutcome {
  std::vector<double> y;  // y[0] is the monetary reward
  double prob = 0.0;
};

class MultiOutcomeAction {
 public:
  /// Throws ValidationError on an empty support, mixed dimensions,
  /// probabilities not summing to 1 or a negative cost.
  MultiOutcomeAction(std::vector<VectorOutcome> support, double cost);

  std::span<const VectorOutcome> support() const { return support_; }
  double cost() const { return cost_; }
  std::size_t dimension() const { return mean_.size(); }
  const std::vector<double>& mean() const { return mean_; }

 private:
  std::vector<VectorOutcome> support_;
  double cost_;
  std::vector<double> mean_;
};

/// Throws ValidationError unless every action has the dimension of b and
/// cost >= b(mean) - kBoundCostTolerance.
void validate_against(std::span<const MultiOutcomeAction> actions, const ConvexBound& b);

struct SingleOutcomeLagrangian {
  double lambda_star = 0.0;
  double slope = 0.0;  // 1 / (lambda* + 1)
  double payoff = 0.0;
  std::size_t witness_action = 0;
};

/// lambda* = sqrt(E*/c*) - 1 for the action maximizing (sqrt(E) - sqrt(c))^2
/// (lowest index on ties). Throws CornerCaseError when that action has c = 0.
SingleOutcomeLagrangian single_outcome_lagrangian(const Technology& known);

/// lambda/(lambda+1) E[y1] - lambda c + lambda b(lambda/(lambda+1) E[y]).
double multi_outcome_objective(const MultiOutcomeAction& action, const ConvexBound& b,
                               double lambda);

struct MultiOutcomeLambda {
  double lambda_star = 0.0;
  std::size_t witness_action = 0;
  double objective = 0.0;
};

/// Geometric grid {0} u [kLambdaGridMin, kLambdaGridMax] per action, golden
/// section inside the best bracket, then the closed-form stationary point of
/// each affine piece. Throws CornerCaseError when an action's grid maximum
/// sits at the largest grid value, which is a heuristic test for an infinite
/// lambda*.
MultiOutcomeLambda multi_outcome_lambda(std::span<const MultiOutcomeAction> actions,
                                        const ConvexBound& b);

// w(y) = base * y1 + sum_i tangent[i] * y_i.
struct MultiOutcomeContract {
  double base = 0.0;              // 1 / (lambda* + 1)
  std::vector<double> tangent;    // lambda* p_i / (lambda* + 1)
  std::size_t active_piece = 0;
  double payoff_bound = 0.0;
  // Some payment on the known supports, or some coefficient, is negative.
  bool limited_liability_violation = false;

  double coefficient(std::size_t i) const { return (i == 0 ? base : 0.0) + tangent.at(i); }
  double payment(std::span<const double> y) const;
};

MultiOutcomeContract multi_outcome_contract(std::span<const MultiOutcomeAction> actions,
                                            const MultiOutcomeLambda& lambda,
                                            const ConvexBound& b);

struct LagrangianReport {
  double value = 0.0;  // inf of the Lagrangian over the mixture family
  double bound = 0.0;
  bool pass = true;    // value >= bound - kLagrangianTolerance
};

/// Infimum of L_w(F, lambda) over F = t F0 + (1 - t) delta_0 with F0 known
/// and t on a uniform grid of `t_points` values plus lambda/(lambda+1).
LagrangianReport verify_lagrangian_bound(std::span<const MultiOutcomeAction> actions,
                                         const MultiOutcomeContract& contract, double lambda,
                                         const ConvexBound& b, std::size_t t_points = 1001);

/// Scalar outcomes as one-dimensional vector actions.
std::vector<MultiOutcomeAction> as_vector_actions(const Technology& known);

}  // namespace robust_contracts
