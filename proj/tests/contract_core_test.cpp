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

#include <cmath>
#include <random>

#include "doctest.h"
#include "robust_contracts/contract_core.hpp"
#include "test_support.hpp"

using namespace robust_contracts;
using rc_test::point_action;
using rc_test::point_technology;

TEST_CASE("expected outcome") {
  CHECK(expected_outcome(OutcomeDist::point_mass(0.0)) == 0.0);
  CHECK(expected_outcome(OutcomeDist({{1.0, 0.5}, {0.0, 0.5}})) == 0.5);
  CHECK(std::abs(expected_outcome(OutcomeDist({{2.0, 0.3}, {5.0, 0.7}})) - 4.1) < 1e-15);
}

TEST_CASE("outcome distribution validation") {
  CHECK_THROWS_AS(OutcomeDist({}), ValidationError);
  CHECK_THROWS_AS(OutcomeDist({{1.0, 0.5}, {0.0, 0.4}}), ValidationError);
  CHECK_THROWS_AS(OutcomeDist({{1.0, 1.2}, {0.0, -0.2}}), ValidationError);
  CHECK_THROWS_AS(OutcomeDist({{-1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(OutcomeDist({{1.0, 0.5}, {1.0, 0.5}}), ValidationError);
  CHECK_THROWS_AS(OutcomeDist({{INFINITY, 1.0}}), ValidationError);
  CHECK_NOTHROW(OutcomeDist({{3.0, 0.25}, {1.0, 0.75}}));
  CHECK_THROWS_AS(Action(OutcomeDist::point_mass(1.0), -0.1), ValidationError);
}

TEST_CASE("agent utility") {
  const Action a = point_action(2.0, 0.3);
  CHECK(agent_utility(LinearContract(0.0), a) == -0.3);
  CHECK(std::abs(agent_utility(LinearContract(0.4), a) - (0.8 - 0.3)) < 1e-15);
  const Action coin(OutcomeDist({{1.0, 0.5}, {0.0, 0.5}}), 0.1);
  const TabularContract w({{0.0, 0.0}, {1.0, 0.4}});
  CHECK(std::abs(agent_utility(w, coin) - 0.1) < 1e-15);
  const TabularContract partial(std::map<double, double>{{1.0, 0.4}});
  CHECK_THROWS_AS(agent_utility(partial, coin), DomainMismatchError);
}

TEST_CASE("contract validation") {
  CHECK_THROWS_AS(LinearContract(-0.01), ValidationError);
  CHECK_THROWS_AS(LinearContract(1.01), ValidationError);
  CHECK_THROWS_AS(TabularContract(std::map<double, double>{{0.0, -0.5}}), ValidationError);
  const std::vector<double> grid{0.0, 1.0, 2.5};
  const TabularContract w = TabularContract::from_linear(LinearContract(0.4), grid);
  CHECK(w.payment(2.5) == 0.4 * 2.5);
  CHECK(w.covers(1.0));
  CHECK_FALSE(w.covers(1.5));
}

TEST_CASE("utility is affine in the slope") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Action a(OutcomeDist({{0.0, 0.3}, {1.0 + unit(rng), 0.7}}), unit(rng));
    const double lo = agent_utility(LinearContract(0.0), a);
    const double hi = agent_utility(LinearContract(1.0), a);
    const double t = unit(rng);
    CHECK(std::abs(agent_utility(LinearContract(t), a) - ((1 - t) * lo + t * hi)) < 1e-12);
  }
}

TEST_CASE("technology inserts the null action and requires a productive action") {
  const Technology t = point_technology({{1.0, 0.5}});
  REQUIRE(t.size() == 2);
  CHECK(t[t.null_index()].is_null());
  const Technology with_null({Action::null_action(), point_action(1.0, 0.5)});
  CHECK(with_null.size() == 2);
  CHECK(with_null.null_index() == 0);
  CHECK_THROWS_AS(point_technology({{1.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(Technology({Action::null_action()}), ValidationError);
}

TEST_CASE("best response tie-breaking") {
  const Technology t = point_technology({{1.0, 0.5}});
  const std::size_t productive = t.null_index() == 0 ? 1 : 0;
  CHECK(best_response(LinearContract(0.0), t, TieBreak::kWorstForPrincipal).index ==
        t.null_index());
  CHECK(best_response(LinearContract(1.0), t, TieBreak::kWorstForPrincipal).index == productive);
  CHECK(best_response(LinearContract(0.5), t, TieBreak::kBestForPrincipal).index == productive);
  CHECK(best_response(LinearContract(0.5), t, TieBreak::kWorstForPrincipal).index ==
        t.null_index());
  const auto br = best_response(LinearContract(0.5), t, TieBreak::kBestForPrincipal);
  CHECK(std::abs(br.principal_payoff - 0.5) < 1e-15);
}

TEST_CASE("best response dominates every action") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Technology t = point_technology(rc_test::random_mean_costs(rng));
    const LinearContract w(unit(rng));
    for (TieBreak tie : {TieBreak::kBestForPrincipal, TieBreak::kWorstForPrincipal}) {
      const auto br = best_response(w, t, tie);
      for (const Action& a : t.actions()) CHECK(br.agent_utility >= agent_utility(w, a) - kUtilityTieTolerance);
      CHECK(br.agent_utility == agent_utility(w, t[br.index]));
    }
  }
}

TEST_CASE("randomized linear contract cdf") {
  const auto g = RandomizedLinearContract::single_agent(0.5);
  CHECK(g.cdf(0.0) == 0.0);
  CHECK(g.cdf(0.5) == 1.0);
  CHECK(g.cdf(0.9) == 1.0);
  CHECK(std::abs(g.cdf(0.25) - std::log(0.75) / std::log(0.5)) < 1e-15);
  const auto point = RandomizedLinearContract::single_agent(0.0);
  CHECK(point.is_point_mass());
  CHECK(point.cdf(0.0) == 1.0);
  CHECK(point.quantile(0.7) == 0.0);
  double prev = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double v = g.cdf(k / 1000.0);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(RandomizedLinearContract::single_agent(1.0), ValidationError);
}
