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

// Instance files: one JSON document whose top-level "kind" is "single",
// "team" or "multi".
//
//   single: {"kind": "single", "actions": [{"name": "work", "cost": 0.5,
//            "outcomes": [{"value": 1.0, "prob": 1.0}]}]}
//           An action may give "mean" instead of "outcomes" for a point mass.
//   team:   {"kind": "team",
//            "agents": [{"name": "a", "actions": ["shirk", "work"],
//                        "costs": [0.0, 0.08]}, ...],
//            "profiles": [{"actions": ["work", "work"], "outcomes": [...]}],
//            "default": {"outcomes": [...]}}
//           Profiles not listed take "default"; without it every profile
//           must be listed.
//   multi:  {"kind": "multi", "actions": [{"cost": 0.3,
//            "outcomes": [{"y": [1.0, 1.0], "prob": 1.0}]}],
//            "bound": [{"p": [0.0, 1.0], "beta": -0.8}]}
//
// A convex bound file is the bare piece list, or {"pieces": [...]}.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "robust_contracts/contract_core.hpp"
#include "robust_contracts/lagrangian.hpp"
#include "robust_contracts/team.hpp"

namespace robust_contracts {

// Message starts with "<source>:<line>:<column>:" for syntax errors and with
// "<source>: field <json pointer>:" for content errors.
class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct SingleInstance {
  Technology technology;
  std::vector<std::string> names;  // per user action
};

struct TeamInstance {
  TeamTechnology technology;
  std::vector<std::string> agent_names;
  std::vector<std::vector<std::string>> action_names;
};

struct MultiInstance {
  std::vector<MultiOutcomeAction> actions;
  ConvexBound bound;
};

using Instance = std::variant<SingleInstance, TeamInstance, MultiInstance>;

Instance parse_instance(std::string_view text, std::string_view source = "<input>");
Instance load_instance(const std::filesystem::path& path);

ConvexBound parse_bound(std::string_view text, std::string_view source = "<input>");

}  // namespace robust_contracts
