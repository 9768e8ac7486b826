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

#include <string>

#include "robust_contracts/io.hpp"
#include "robust_contracts/single_agent.hpp"

using namespace robust_contracts;

namespace {

std::string error_of(std::string_view text) {
  try {
    parse_instance(text, "in.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("single technology file") {
  const Instance inst = parse_instance(R"({
    "kind": "single",
    "actions": [
      {"name": "work", "cost": 0.5, "outcomes": [{"value": 1.0, "prob": 1.0}]},
      {"cost": 0.1, "mean": 0.4}
    ]
  })");
  const auto& single = std::get<SingleInstance>(inst);
  CHECK(single.names == std::vector<std::string>{"work", "action1"});
  CHECK(single.technology.size() == 3);
  CHECK(single.technology[1].mean() == 0.4);
  CHECK(critical_slope(single.technology).value > 0.18);
}

TEST_CASE("team technology file") {
  const char* text = R"({
    "kind": "team",
    "agents": [
      {"name": "a", "actions": ["shirk", "work"], "costs": [0.0, 0.08]},
      {"name": "b", "actions": ["shirk", "work"], "costs": [0.0, 0.02]}
    ],
    "profiles": [{"actions": ["work", "work"], "outcomes": [{"value": 1.0, "prob": 1.0}]}],
    "default": {"outcomes": [{"value": 0.0, "prob": 1.0}]}
  })";
  const Instance inst = parse_instance(text);
  const auto& team = std::get<TeamInstance>(inst);
  CHECK(team.technology.profiles() == 4);
  CHECK(team.technology.mean(3) == 1.0);
  CHECK(team.technology.mean(1) == 0.0);
  CHECK(team.action_names[1][1] == "work");
  CHECK(team_critical_slope(team.technology).value ==
        doctest::Approx(0.46361990803496).epsilon(1e-10));

  const std::string no_default = R"({"kind": "team",
    "agents": [{"actions": ["x", "y"], "costs": [0, 1]}],
    "profiles": [{"actions": ["y"], "outcomes": [{"value": 3, "prob": 1}]}]})";
  CHECK(error_of(no_default).find("profile (x) is missing") != std::string::npos);

  const std::string no_zero = R"({"kind": "team",
    "agents": [{"actions": ["x"], "costs": [0.5]}],
    "profiles": [{"actions": ["x"], "outcomes": [{"value": 3, "prob": 1}]}]})";
  CHECK(error_of(no_zero).find("every agent's cost is 0") != std::string::npos);

  const std::string barren = R"({"kind": "team",
    "agents": [{"actions": ["x", "y"], "costs": [0, 1]}],
    "default": {"outcomes": [{"value": 0.0, "prob": 1}]},
    "profiles": [{"actions": ["y"], "outcomes": [{"value": 0.5, "prob": 1}]}]})";
  CHECK(error_of(barren).find("not productive") != std::string::npos);

  const std::string bad_label = R"({"kind": "team",
    "agents": [{"actions": ["x", "y"], "costs": [0, 1]}],
    "profiles": [{"actions": ["z"], "outcomes": [{"value": 3, "prob": 1}]}]})";
  CHECK(error_of(bad_label).find("field /profiles/0/actions/0") != std::string::npos);
}

TEST_CASE("multi-outcome file and bound files") {
  const Instance inst = parse_instance(R"({
    "kind": "multi",
    "actions": [{"cost": 0.3, "outcomes": [{"y": [1.0, 1.0], "prob": 1.0}]}],
    "bound": [{"p": [0.0, 0.0], "beta": 0.0}, {"p": [0.0, 1.0], "beta": -0.8}]
  })");
  const auto& multi = std::get<MultiInstance>(inst);
  CHECK(multi.actions.size() == 1);
  CHECK(multi.bound.pieces().size() == 2);

  CHECK(error_of(R"({"kind": "multi",
    "actions": [{"cost": 0.1, "outcomes": [{"y": [1.0, 1.0], "prob": 1.0}]}],
    "bound": [{"p": [0.0, 1.0], "beta": -0.8}]})")
            .find("below the bound") != std::string::npos);

  CHECK(parse_bound(R"([{"p": [1.0], "beta": 0.5}])").dimension() == 1);
  CHECK(parse_bound(R"({"pieces": [{"p": [1.0, 2.0], "beta": 0.5}]})").dimension() == 2);
  CHECK_THROWS_AS(parse_bound(R"({"pieces": [{"p": [1.0], "beta": "x"}]})"), ParseError);
}

TEST_CASE("diagnostics name the line or the field") {
  const std::string syntax = "{\n  \"kind\": \"single\",\n  \"actions\": [\n    {\"cost\": 0.5,,}\n  ]\n}";
  const std::string msg = error_of(syntax);
  CHECK(msg.rfind("in.json:4:", 0) == 0);

  const std::string probs = R"({"kind": "single", "actions": [{"cost": 0.5,
    "outcomes": [{"value": 1.0, "prob": 0.5}, {"value": 2.0, "prob": 0.4}]}]})";
  CHECK(error_of(probs).find("field /actions/0/outcomes") != std::string::npos);

  CHECK(error_of(R"({"kind": "single", "actions": [{"cost": "high", "mean": 1}]})")
            .find("field /actions/0/cost: expected a number") != std::string::npos);
  CHECK(error_of(R"({"actions": []})").find("missing required field \"kind\"") !=
        std::string::npos);
  CHECK(error_of(R"({"kind": "pair"})").find("unknown kind") != std::string::npos);
  CHECK(error_of(R"({"kind": "single", "actions": []})").find("must not be empty") !=
        std::string::npos);
  CHECK_THROWS_AS(load_instance("/nonexistent/file.json"), ValidationError);
}
