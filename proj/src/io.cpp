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

#include "robust_contracts/io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace robust_contracts {
namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ParseError(fmt::format("{}: field {}: {}", source_, path.empty() ? "/" : path,
                                 message));
  }

  template <typename F>
  auto guarded(const std::string& path, F&& build) const {
    try {
      return build();
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(path, e.what());
    }
  }

  const json& member(const json& j, const std::string& path, const char* key) const {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path, fmt::format("missing required field \"{}\"", key));
    return *it;
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, fmt::format("expected a number, got {}", j.type_name()));
    return j.get<double>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, fmt::format("expected a string, got {}", j.type_name()));
    return j.get<std::string>();
  }

  const json& array(const json& j, const std::string& path, bool allow_empty = false) const {
    if (!j.is_array()) fail(path, fmt::format("expected an array, got {}", j.type_name()));
    if (!allow_empty && j.empty()) fail(path, "array must not be empty");
    return j;
  }

  std::vector<double> numbers(const json& j, const std::string& path) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < array(j, path).size(); ++i) {
      out.push_back(number(j[i], fmt::format("{}/{}", path, i)));
    }
    return out;
  }

  OutcomeDist dist(const json& j, const std::string& path) const {
    const std::string outcomes_path = path + "/outcomes";
    const json& outcomes = array(member(j, path, "outcomes"), outcomes_path);
    std::vector<Outcome> support;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const std::string p = fmt::format("{}/{}", outcomes_path, i);
      support.push_back({number(member(outcomes[i], p, "value"), p + "/value"),
                         number(member(outcomes[i], p, "prob"), p + "/prob")});
    }
    return guarded(outcomes_path, [&] { return OutcomeDist(std::move(support)); });
  }


 private:
  std::string source_;
};

json parse_json(std::string_view text, std::string_view source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] parse error at ...: " prefix.
    if (const auto pos = what.rfind(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(fmt::format("{}:{}:{}: {}", source, line, column, what));
  }
}

SingleInstance parse_single(const json& doc, const Reader& r) {
  const json& actions = r.array(r.member(doc, "", "actions"), "/actions");
  std::vector<Action> parsed;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string path = fmt::format("/actions/{}", i);
    const json& a = actions[i];
    const double cost = r.number(r.member(a, path, "cost"), path + "/cost");
    OutcomeDist dist = OutcomeDist::point_mass(0.0);
    if (a.is_object() && a.contains("mean") && !a.contains("outcomes")) {
      const double mean = r.number(a["mean"], path + "/mean");
      dist = r.guarded(path + "/mean", [&] { return OutcomeDist::point_mass(mean); });
    } else {
      dist = r.dist(a, path);
    }
    parsed.push_back(r.guarded(path, [&] { return Action(std::move(dist), cost); }));
    names.push_back(a.contains("name") ? r.string(a["name"], path + "/name")
                                       : fmt::format("action{}", i));
  }
  Technology tech = r.guarded("/actions", [&] { return Technology(std::move(parsed)); });
  return SingleInstance{std::move(tech), std::move(names)};
}

TeamInstance parse_team(const json& doc, const Reader& r) {
  const json& agents = r.array(r.member(doc, "", "agents"), "/agents");
  std::vector<std::vector<double>> costs;
  std::vector<std::string> agent_names;
  std::vector<std::vector<std::string>> action_names;
  std::vector<std::map<std::string, std::size_t>> action_index;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = fmt::format("/agents/{}", i);
    const json& agent = agents[i];
    const json& labels = r.array(r.member(agent, path, "actions"), path + "/actions");
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    for (std::size_t a = 0; a < labels.size(); ++a) {
      const std::string label_path = fmt::format("{}/actions/{}", path, a);
      names.push_back(r.string(labels[a], label_path));
      if (!index.emplace(names.back(), a).second) {
        r.fail(label_path, fmt::format("duplicate action label \"{}\"", names.back()));
      }
    }
    std::vector<double> c = r.numbers(r.member(agent, path, "costs"), path + "/costs");
    if (c.size() != names.size()) {
      r.fail(path + "/costs",
             fmt::format("{} costs for {} actions", c.size(), names.size()));
    }
    agent_names.push_back(agent.contains("name") ? r.string(agent["name"], path + "/name")
                                                 : fmt::format("agent{}", i));
    costs.push_back(std::move(c));
    action_names.push_back(std::move(names));
    action_index.push_back(std::move(index));
  }

  double count = 1.0;
  for (const auto& c : costs) count *= static_cast<double>(c.size());
  if (count > static_cast<double>(kMaxTeamProfiles)) {
    r.fail("/agents", fmt::format("{} joint profiles exceed the limit of {}", count,
                                  kMaxTeamProfiles));
  }
  std::vector<std::size_t> stride(costs.size(), 1);
  for (std::size_t i = costs.size() - 1; i-- > 0;) stride[i] = stride[i + 1] * costs[i + 1].size();

  std::vector<std::optional<OutcomeDist>> dists(static_cast<std::size_t>(count));
  const json& profiles = r.array(r.member(doc, "", "profiles"), "/profiles", true);
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const std::string path = fmt::format("/profiles/{}", k);
    const json& labels = r.array(r.member(profiles[k], path, "actions"), path + "/actions");
    if (labels.size() != costs.size()) {
      r.fail(path + "/actions",
             fmt::format("{} actions for {} agents", labels.size(), costs.size()));
    }
    std::size_t profile = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const std::string label_path = fmt::format("{}/actions/{}", path, i);
      const std::string label = r.string(labels[i], label_path);
      const auto it = action_index[i].find(label);
      if (it == action_index[i].end()) {
        r.fail(label_path, fmt::format("agent {} has no action \"{}\"", agent_names[i], label));
      }
      profile += it->second * stride[i];
    }
    if (dists[profile]) r.fail(path, "profile listed twice");
    dists[profile] = r.dist(profiles[k], path);
  }
  std::optional<OutcomeDist> fallback;
  if (doc.contains("default")) fallback = r.dist(doc["default"], "/default");
  std::vector<OutcomeDist> filled;
  for (std::size_t p = 0; p < dists.size(); ++p) {
    if (dists[p]) {
      filled.push_back(*dists[p]);
    } else if (fallback) {
      filled.push_back(*fallback);
    } else {
      std::string labels;
      for (std::size_t i = 0; i < costs.size(); ++i) {
        labels += (i ? ", " : "") + action_names[i][(p / stride[i]) % costs[i].size()];
      }
      r.fail("/profiles", fmt::format("profile ({}) is missing and there is no \"default\"",
                                      labels));
    }
  }
  TeamTechnology tech =
      r.guarded("", [&] { return TeamTechnology(std::move(costs), std::move(filled)); });
  return TeamInstance{std::move(tech), std::move(agent_names), std::move(action_names)};
}

ConvexBound parse_pieces(const json& pieces, const std::string& path, const Reader& r) {
  r.array(pieces, path);
  std::vector<AffinePiece> parsed;
  for (std::size_t j = 0; j < pieces.size(); ++j) {
    const std::string p = fmt::format("{}/{}", path, j);
    parsed.push_back({r.numbers(r.member(pieces[j], p, "p"), p + "/p"),
                      r.number(r.member(pieces[j], p, "beta"), p + "/beta")});
  }
  return r.guarded(path, [&] { return ConvexBound(std::move(parsed)); });
}

MultiInstance parse_multi(const json& doc, const Reader& r) {
  const json& actions = r.array(r.member(doc, "", "actions"), "/actions");
  std::vector<MultiOutcomeAction> parsed;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string path = fmt::format("/actions/{}", i);
    const json& a = actions[i];
    const double cost = r.number(r.member(a, path, "cost"), path + "/cost");
    const json& outcomes = r.array(r.member(a, path, "outcomes"), path + "/outcomes");
    std::vector<VectorOutcome> support;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      const std::string p = fmt::format("{}/outcomes/{}", path, k);
      support.push_back({r.numbers(r.member(outcomes[k], p, "y"), p + "/y"),
                         r.number(r.member(outcomes[k], p, "prob"), p + "/prob")});
    }
    parsed.push_back(
        r.guarded(path, [&] { return MultiOutcomeAction(std::move(support), cost); }));
  }
  ConvexBound bound = parse_pieces(r.member(doc, "", "bound"), "/bound", r);
  r.guarded("/actions", [&] {
    validate_against(parsed, bound);
    return 0;
  });
  return MultiInstance{std::move(parsed), std::move(bound)};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open {}", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

Instance parse_instance(std::string_view text, std::string_view source) {
  const json doc = parse_json(text, source);
  const Reader r(source);
  const std::string kind = r.string(r.member(doc, "", "kind"), "/kind");
  if (kind == "single") return parse_single(doc, r);
  if (kind == "team") return parse_team(doc, r);
  if (kind == "multi") return parse_multi(doc, r);
  r.fail("/kind", fmt::format("unknown kind \"{}\" (expected single, team or multi)", kind));
}

Instance load_instance(const std::filesystem::path& path) {
  return parse_instance(read_file(path), path.string());
}

ConvexBound parse_bound(std::string_view text, std::string_view source) {
  const json doc = parse_json(text, source);
  const Reader r(source);
  if (doc.is_array()) return parse_pieces(doc, "", r);
  return parse_pieces(r.member(doc, "", "pieces"), "/pieces", r);
}

}  // namespace robust_contracts
