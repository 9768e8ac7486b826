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

#include "robust_contracts/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace robust_contracts {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> lambda_grid() {
  std::vector<double> grid = {0.0};
  const double decades = std::log10(kLambdaGridMax / kLambdaGridMin);
  const auto steps = static_cast<std::size_t>(std::lround(decades * kLambdaGridPerDecade));
  for (std::size_t k = 0; k <= steps; ++k) {
    grid.push_back(kLambdaGridMin *
                   std::pow(10.0, static_cast<double>(k) / kLambdaGridPerDecade));
  }
  return grid;
}

double golden_max(const MultiOutcomeAction& action, const ConvexBound& b, double lo,
                  double hi) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = multi_outcome_objective(action, b, x1);
  double f2 = multi_outcome_objective(action, b, x2);
  while (hi - lo > kLambdaTolerance * (1.0 + lo)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = multi_outcome_objective(action, b, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = multi_outcome_objective(action, b, x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ConvexBound::ConvexBound(std::vector<AffinePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw ValidationError("convex bound needs at least one affine piece");
  const std::size_t k = pieces_.front().p.size();
  if (k == 0) throw ValidationError("affine pieces need at least one coefficient");
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    const AffinePiece& piece = pieces_[j];
    if (piece.p.size() != k) {
      throw ValidationError(fmt::format("piece {} has {} coefficients, expected {}", j,
                                        piece.p.size(), k));
    }
    if (!std::isfinite(piece.beta) ||
        !std::all_of(piece.p.begin(), piece.p.end(), [](double v) { return std::isfinite(v); })) {
      throw ValidationError(fmt::format("piece {} has a non-finite coefficient", j));
    }
  }
}

ConvexBound ConvexBound::zero(std::size_t dimension) {
  return ConvexBound({AffinePiece{std::vector<double>(dimension, 0.0), 0.0}});
}

double ConvexBound::piece_value(std::size_t j, std::span<const double> x) const {
  const AffinePiece& piece = pieces_.at(j);
  if (x.size() != piece.p.size()) {
    throw ValidationError(fmt::format("point has dimension {}, bound has {}", x.size(),
                                      piece.p.size()));
  }
  return dot(piece.p, x) + piece.beta;
}

double ConvexBound::operator()(std::span<const double> x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < pieces_.size(); ++j) best = std::max(best, piece_value(j, x));
  return best;
}

std::size_t ConvexBound::active_piece(std::span<const double> x) const {
  const double top = (*this)(x);
  const double band = 1e-12 * (1.0 + std::abs(top));
  for (std::size_t j = 0; j < pieces_.size(); ++j) {
    if (piece_value(j, x) >= top - band) return j;
  }
  return 0;
}

MultiOutcomeAction::MultiOutcomeAction(std::vector<VectorOutcome> support, double cost)
    : support_(std::move(support)), cost_(cost) {
  if (support_.empty()) throw ValidationError("vector outcome distribution has empty support");
  if (!(cost_ >= 0.0) || !std::isfinite(cost_)) {
    throw ValidationError(fmt::format("cost {} must be finite and nonnegative", cost_));
  }
  const std::size_t k = support_.front().y.size();
  if (k == 0) throw ValidationError("outcome vectors need at least one coordinate");
  mean_.assign(k, 0.0);
  double total = 0.0;
  for (const VectorOutcome& o : support_) {
    if (o.y.size() != k) {
      throw ValidationError(fmt::format("outcome vector of dimension {}, expected {}",
                                        o.y.size(), k));
    }
    if (!(o.prob >= 0.0 && o.prob <= 1.0)) {
      throw ValidationError(fmt::format("probability {} outside [0, 1]", o.prob));
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!std::isfinite(o.y[i])) throw ValidationError("outcome coordinate is not finite");
      mean_[i] += o.prob * o.y[i];
    }
    total += o.prob;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance * static_cast<double>(support_.size())) {
    throw ValidationError(fmt::format("probabilities sum to {}, not 1", total));
  }
}

void validate_against(std::span<const MultiOutcomeAction> actions, const ConvexBound& b) {
  if (actions.empty()) throw ValidationError("known technology has no actions");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].dimension() != b.dimension()) {
      throw ValidationError(fmt::format("action {} has dimension {}, bound has {}", i,
                                        actions[i].dimension(), b.dimension()));
    }
    const double floor = b(actions[i].mean());
    if (actions[i].cost() < floor - kBoundCostTolerance) {
      throw ValidationError(fmt::format("action {} costs {}, below the bound b(E[y]) = {}", i,
                                        actions[i].cost(), floor));
    }
  }
}

SingleOutcomeLagrangian single_outcome_lagrangian(const Technology& known) {
  SingleOutcomeLagrangian result;
  double best = -1.0;
  for (std::size_t i = 0; i < known.size(); ++i) {
    const double gap = std::max(0.0, std::sqrt(known[i].mean()) - std::sqrt(known[i].cost()));
    if (gap * gap > best) {
      best = gap * gap;
      result.witness_action = i;
    }
  }
  const Action& star = known[result.witness_action];
  if (star.cost() == 0.0) {
    throw CornerCaseError(fmt::format(
        "lambda* is infinite: the best action {} has zero cost; the optimum is the zero "
        "contract w(y) = 0, which needs best-case tie-breaking",
        result.witness_action));
  }
  result.lambda_star = std::sqrt(star.mean() / star.cost()) - 1.0;
  result.slope = std::sqrt(star.cost() / star.mean());
  result.payoff = best;
  return result;
}

double multi_outcome_objective(const MultiOutcomeAction& action, const ConvexBound& b,
                               double lambda) {
  const double share = lambda / (lambda + 1.0);
  std::vector<double> x = action.mean();
  for (double& v : x) v *= share;
  return share * action.mean()[0] - lambda * action.cost() + lambda * b(x);
}

MultiOutcomeLambda multi_outcome_lambda(std::span<const MultiOutcomeAction> actions,
                                        const ConvexBound& b) {
  validate_against(actions, b);
  const std::vector<double> grid = lambda_grid();

  MultiOutcomeLambda result;
  result.objective = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const MultiOutcomeAction& action = actions[a];
    std::size_t k_best = 0;
    double f_best = multi_outcome_objective(action, b, grid[0]);
    for (std::size_t k = 1; k < grid.size(); ++k) {
      const double f = multi_outcome_objective(action, b, grid[k]);
      if (f > f_best) {
        f_best = f;
        k_best = k;
      }
    }
    if (k_best + 1 == grid.size()) {
      throw CornerCaseError(fmt::format(
          "lambda* appears infinite (heuristic): the objective of action {} is largest at "
          "the top of the lambda grid ({}); the optimum degenerates to the zero contract",
          a, grid.back()));
    }

    // Closed-form stationary point of each piece:
    // f_j = E1 (1 - 1/r) + P (r - 2 + 1/r) - (r - 1)(c - beta), r = lambda + 1.
    std::vector<double> candidates;
    for (const AffinePiece& piece : b.pieces()) {
      const double slope_mass = dot(piece.p, action.mean());
      const double a_coef = action.mean()[0] - slope_mass;
      const double d_coef = action.cost() - piece.beta - slope_mass;
      if (a_coef > 0.0 && d_coef > 0.0) {
        const double lambda = std::sqrt(a_coef / d_coef) - 1.0;
        if (lambda >= 0.0 && lambda <= grid.back()) candidates.push_back(lambda);
      }
    }
    const double lo = k_best == 0 ? 0.0 : grid[k_best - 1];
    candidates.push_back(grid[k_best]);
    candidates.push_back(golden_max(action, b, lo, grid[k_best + 1]));
    double lambda_best = candidates.front();
    double value_best = multi_outcome_objective(action, b, lambda_best);
    for (double lambda : candidates) {
      const double f = multi_outcome_objective(action, b, lambda);
      if (f > value_best + 1e-14 * (1.0 + std::abs(value_best))) {
        value_best = f;
        lambda_best = lambda;
      }
    }
    if (a == 0 || value_best > result.objective + 1e-12 * (1.0 + std::abs(result.objective))) {
      result.objective = value_best;
      result.lambda_star = lambda_best;
      result.witness_action = a;
    }
  }
  return result;
}

double MultiOutcomeContract::payment(std::span<const double> y) const {
  if (y.size() != tangent.size()) {
    throw ValidationError(fmt::format("outcome of dimension {}, contract has {}", y.size(),
                                      tangent.size()));
  }
  double w = base * y[0];
  for (std::size_t i = 0; i < y.size(); ++i) w += tangent[i] * y[i];
  return w;
}

MultiOutcomeContract multi_outcome_contract(std::span<const MultiOutcomeAction> actions,
                                            const MultiOutcomeLambda& lambda,
                                            const ConvexBound& b) {
  const MultiOutcomeAction& star = actions[lambda.witness_action];
  const double l = lambda.lambda_star;
  const double share = l / (l + 1.0);
  std::vector<double> x = star.mean();
  for (double& v : x) v *= share;

  MultiOutcomeContract contract;
  contract.active_piece = b.active_piece(x);
  contract.base = 1.0 / (l + 1.0);
  for (double p : b.pieces()[contract.active_piece].p) contract.tangent.push_back(l * p / (l + 1.0));
  contract.payoff_bound = share * star.mean()[0] - l * star.cost() + l * b(x);

  for (std::size_t i = 0; i < contract.tangent.size(); ++i) {
    if (contract.coefficient(i) < 0.0) contract.limited_liability_violation = true;
  }
  for (const MultiOutcomeAction& action : actions) {
    for (const VectorOutcome& o : action.support()) {
      if (contract.payment(o.y) < -1e-12) contract.limited_liability_violation = true;
    }
  }
  return contract;
}

LagrangianReport verify_lagrangian_bound(std::span<const MultiOutcomeAction> actions,
                                         const MultiOutcomeContract& contract, double lambda,
                                         const ConvexBound& b, std::size_t t_points) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError(fmt::format("multiplier {} must be finite and nonnegative", lambda));
  }
  if (t_points < 2) throw ValidationError("mixture grid needs at least 2 points");
  validate_against(actions, b);

  double agent_best = -std::numeric_limits<double>::infinity();
  for (const MultiOutcomeAction& action : actions) {
    agent_best = std::max(agent_best, contract.payment(action.mean()) - action.cost());
  }
  std::vector<double> ts;
  for (std::size_t k = 0; k < t_points; ++k) {
    ts.push_back(static_cast<double>(k) / static_cast<double>(t_points - 1));
  }
  ts.push_back(lambda / (lambda + 1.0));

  LagrangianReport report;
  report.bound = contract.payoff_bound;
  report.value = std::numeric_limits<double>::infinity();
  std::vector<double> x;
  for (const MultiOutcomeAction& action : actions) {
    const double wage = contract.payment(action.mean());
    for (double t : ts) {
      x = action.mean();
      for (double& v : x) v *= t;
      const double l = t * (action.mean()[0] - wage) + lambda * (agent_best - t * wage + b(x));
      report.value = std::min(report.value, l);
    }
  }
  report.pass = report.value >= report.bound - kLagrangianTolerance;
  return report;
}

std::vector<MultiOutcomeAction> as_vector_actions(const Technology& known) {
  std::vector<MultiOutcomeAction> actions;
  for (const Action& a : known.actions()) {
    std::vector<VectorOutcome> support;
    for (const Outcome& o : a.dist().support()) support.push_back({{o.value}, o.prob});
    actions.emplace_back(std::move(support), a.cost());
  }
  return actions;
}

}  // namespace robust_contracts
