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

#include <doctest.h>

#include <cmath>
#include <random>

#include "robust_contracts/lagrangian.hpp"
#include "robust_contracts/single_agent.hpp"
#include "test_support.hpp"

using namespace robust_contracts;

namespace {

MultiOutcomeAction point_vector(std::vector<double> y, double cost) {
  return MultiOutcomeAction({{std::move(y), 1.0}}, cost);
}

// Max of the objective on a uniform lambda grid.
double dense_max(std::span<const MultiOutcomeAction> actions, const ConvexBound& b,
                 double top, double step) {
  double best = -INFINITY;
  for (const MultiOutcomeAction& action : actions) {
    for (double lambda = 0.0; lambda <= top; lambda += step) {
      best = std::max(best, multi_outcome_objective(action, b, lambda));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("convex bound evaluation") {
  const ConvexBound b({{{0.0, 0.0}, 0.0}, {{0.0, 1.0}, -0.8}});
  CHECK(b.dimension() == 2);
  CHECK(b(std::vector<double>{1.0, 1.0}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(b(std::vector<double>{1.0, 0.5}) == 0.0);
  CHECK(b.active_piece(std::vector<double>{1.0, 1.0}) == 1);
  CHECK(b.active_piece(std::vector<double>{1.0, 0.8}) == 0);
  for (double y2 : {0.0, 0.3, 0.9, 1.7}) {
    const std::vector<double> x = {0.4, y2};
    const std::size_t j = b.active_piece(x);
    CHECK(b(x) == b.piece_value(j, x));
  }
  CHECK(ConvexBound::zero(3)(std::vector<double>{1.0, 2.0, 3.0}) == 0.0);

  CHECK_THROWS_AS(ConvexBound({}), ValidationError);
  CHECK_THROWS_AS(ConvexBound({{{0.0}, 0.0}, {{0.0, 1.0}, 0.0}}), ValidationError);
  CHECK_THROWS_AS(ConvexBound({{{NAN}, 0.0}}), ValidationError);
  CHECK_THROWS_AS(b(std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("vector outcome actions") {
  const MultiOutcomeAction a({{{1.0, 0.0}, 0.5}, {{3.0, 2.0}, 0.5}}, 0.3);
  CHECK(a.mean() == std::vector<double>{2.0, 1.0});
  CHECK_THROWS_AS(MultiOutcomeAction({}, 0.1), ValidationError);
  CHECK_THROWS_AS(MultiOutcomeAction({{{1.0}, 0.5}, {{1.0, 2.0}, 0.5}}, 0.1), ValidationError);
  CHECK_THROWS_AS(MultiOutcomeAction({{{1.0}, 0.4}}, 0.1), ValidationError);
  CHECK_THROWS_AS(point_vector({1.0}, -0.1), ValidationError);

  const ConvexBound b({{{0.0, 0.0}, 0.0}, {{0.0, 1.0}, -0.8}});
  const std::vector<MultiOutcomeAction> cheap = {point_vector({1.0, 1.0}, 0.1)};
  CHECK_THROWS_AS(validate_against(cheap, b), ValidationError);
  const std::vector<MultiOutcomeAction> flat = {point_vector({1.0}, 0.3)};
  CHECK_THROWS_AS(validate_against(flat, b), ValidationError);
}

TEST_CASE("single-outcome Lagrangian examples") {
  const auto a = single_outcome_lagrangian(rc_test::point_technology({{1.0, 0.25}}));
  CHECK(a.lambda_star == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.slope == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a.payoff == doctest::Approx(0.25).epsilon(1e-15));

  const auto b = single_outcome_lagrangian(rc_test::point_technology({{4.0, 1.0}}));
  CHECK(b.lambda_star == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b.slope == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(b.payoff == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(single_outcome_lagrangian(rc_test::point_technology({{1.0, 0.0}})),
                  CornerCaseError);
  CHECK_THROWS_AS(
      single_outcome_lagrangian(rc_test::point_technology({{1.0, 2.0}, {0.5, 0.0}})),
      CornerCaseError);
}

TEST_CASE("single-outcome Lagrangian equals the deterministic optimum") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const auto mc = rc_test::random_mean_costs(rng);
    const Technology tech = rc_test::point_technology(mc);
    const auto lag = single_outcome_lagrangian(tech);
    CHECK(lag.payoff == deterministic_optimum(tech).payoff);
    CHECK(lag.payoff == doctest::Approx(rc_test::reference_deterministic(mc)).epsilon(1e-12));
    CHECK(lag.slope == doctest::Approx(1.0 / (lag.lambda_star + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("multi-outcome pipeline reduces to the scalar case") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto mc = rc_test::random_mean_costs(rng);
    const Technology tech = rc_test::point_technology(mc);
    const auto scalar = single_outcome_lagrangian(tech);
    const auto actions = as_vector_actions(tech);
    const ConvexBound b = ConvexBound::zero(1);
    const MultiOutcomeLambda lambda = multi_outcome_lambda(actions, b);
    CHECK(lambda.lambda_star == doctest::Approx(scalar.lambda_star).epsilon(1e-12));
    CHECK(lambda.objective == doctest::Approx(scalar.payoff).epsilon(1e-12));
    const MultiOutcomeContract w = multi_outcome_contract(actions, lambda, b);
    CHECK(w.coefficient(0) == doctest::Approx(scalar.slope).epsilon(1e-12));
    CHECK(!w.limited_liability_violation);

    const LagrangianReport report = verify_lagrangian_bound(actions, w, lambda.lambda_star, b);
    CHECK(report.pass);
    CHECK(report.value == doctest::Approx(scalar.payoff).epsilon(1e-6));
  }
}

TEST_CASE("two-dimensional example") {
  const ConvexBound b({{{0.0, 0.0}, 0.0}, {{0.0, 1.0}, -0.8}});
  const std::vector<MultiOutcomeAction> actions = {point_vector({1.0, 1.0}, 0.3)};
  const MultiOutcomeLambda lambda = multi_outcome_lambda(actions, b);
  const double oracle = dense_max(actions, b, 10.0, 1e-4);
  CHECK(std::abs(lambda.objective - oracle) <= 1e-6);
  CHECK(lambda.lambda_star == doctest::Approx(std::sqrt(1.0 / 0.3) - 1.0).epsilon(1e-12));

  const MultiOutcomeContract w = multi_outcome_contract(actions, lambda, b);
  CHECK(w.active_piece == 0);
  CHECK(w.payoff_bound ==
        doctest::Approx(multi_outcome_objective(actions[0], b, lambda.lambda_star))
            .epsilon(1e-12));
  const LagrangianReport report = verify_lagrangian_bound(actions, w, lambda.lambda_star, b);
  CHECK(report.pass);
  CHECK(std::abs(report.value - report.bound) <= 1e-6);
}

TEST_CASE("unbounded multiplier is detected") {
  const ConvexBound b({{{0.0, 0.0}, 0.0}, {{0.0, 0.5}, -0.2}});
  const std::vector<MultiOutcomeAction> actions = {point_vector({1.0, 1.0}, 0.3)};
  CHECK_THROWS_AS(multi_outcome_lambda(actions, b), CornerCaseError);
  const std::vector<MultiOutcomeAction> free = {point_vector({1.0}, 0.0)};
  CHECK_THROWS_AS(multi_outcome_lambda(free, ConvexBound::zero(1)), CornerCaseError);
}

TEST_CASE("tangent contract coefficients") {
  const ConvexBound b({{{0.0, 0.0}, 0.0}, {{0.0, 0.5}, -0.4}});
  const std::vector<MultiOutcomeAction> actions = {point_vector({1.0, 2.0}, 0.7)};
  const MultiOutcomeContract w =
      multi_outcome_contract(actions, MultiOutcomeLambda{1.0, 0, 0.0}, b);
  CHECK(w.active_piece == 1);
  CHECK(w.coefficient(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(w.coefficient(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(w.tangent[0] == 0.0);
  CHECK(w.payoff_bound ==
        doctest::Approx(multi_outcome_objective(actions[0], b, 1.0)).epsilon(1e-12));
  CHECK(w.payment(std::vector<double>{2.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("negative tangent slope raises the limited-liability flag") {
  const ConvexBound b({{{0.0, 0.0}, 0.0}, {{0.0, -0.5}, 0.5}});
  const std::vector<MultiOutcomeAction> actions = {point_vector({1.0, 1.0}, 0.3)};
  const MultiOutcomeLambda lambda = multi_outcome_lambda(actions, b);
  REQUIRE(lambda.lambda_star > 0.0);
  const MultiOutcomeContract w = multi_outcome_contract(actions, lambda, b);
  CHECK(w.active_piece == 1);
  CHECK(w.coefficient(1) < 0.0);
  CHECK(w.limited_liability_violation);
}

TEST_CASE("Lagrangian at lambda = 0") {
  const std::vector<MultiOutcomeAction> actions = {point_vector({2.0}, 0.5),
                                                   point_vector({1.0}, 0.1)};
  MultiOutcomeContract w;
  w.base = 0.25;
  w.tangent = {0.0};
  const LagrangianReport report = verify_lagrangian_bound(actions, w, 0.0, ConvexBound::zero(1));
  // inf over t of t (E - w(E)) is reached at t = 0.
  CHECK(report.value == 0.0);
  w.base = 1.5;
  CHECK(verify_lagrangian_bound(actions, w, 0.0, ConvexBound::zero(1)).value ==
        doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(verify_lagrangian_bound(actions, w, -1.0, ConvexBound::zero(1)),
                  ValidationError);
}

TEST_CASE("random two-dimensional instances") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<AffinePiece> pieces = {{{0.0, 0.0}, 0.0}};
    for (int j = 0; j < 2; ++j) {
      pieces.push_back({{0.3 * unit(rng), unit(rng) - 0.3}, -0.5 * unit(rng)});
    }
    const ConvexBound b(pieces);
    std::vector<MultiOutcomeAction> actions;
    for (int a = 0; a < 3; ++a) {
      std::vector<VectorOutcome> support = {{{3.0 * unit(rng), 2.0 * unit(rng)}, 0.5},
                                            {{3.0 * unit(rng), 2.0 * unit(rng)}, 0.5}};
      const MultiOutcomeAction probe(support, 0.0);
      actions.emplace_back(support, b(probe.mean()) + 0.05 + unit(rng));
    }
    const MultiOutcomeLambda lambda = multi_outcome_lambda(actions, b);
    const double oracle = dense_max(actions, b, 20.0, 1e-3);
    CHECK(lambda.objective >= oracle - 1e-12);
    CHECK(lambda.objective - oracle <= 1e-6);

    const MultiOutcomeContract w = multi_outcome_contract(actions, lambda, b);
    CHECK(w.payoff_bound == doctest::Approx(lambda.objective).epsilon(1e-9));
    const LagrangianReport report = verify_lagrangian_bound(actions, w, lambda.lambda_star, b);
    CHECK(report.pass);
    CHECK(report.value - report.bound <= 1e-6);
  }
}
