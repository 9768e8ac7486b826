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

// Random team technologies and a brute-force simplex search for the tests.

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "robust_contracts/team.hpp"

namespace rc_test {

// Agents with 2 or 3 actions each, action 0 free, and profile means in
// [0, 3) carried by a two-point distribution.
inline robust_contracts::TeamTechnology random_team(std::mt19937_64& rng, std::size_t agents) {
  std::uniform_int_distribution<int> count(2, 3);
  std::uniform_real_distribution<double> cost(0.0, 0.3);
  std::uniform_real_distribution<double> mean(0.0, 3.0);
  std::vector<std::vector<double>> costs(agents);
  std::size_t profiles = 1;
  for (auto& c : costs) {
    c.push_back(0.0);
    const int k = count(rng);
    for (int a = 1; a < k; ++a) c.push_back(cost(rng));
    profiles *= c.size();
  }
  std::vector<robust_contracts::OutcomeDist> dists;
  for (std::size_t p = 0; p < profiles; ++p) {
    const double e = p == 0 ? 0.3 * mean(rng) : mean(rng);
    dists.push_back(robust_contracts::OutcomeDist({{0.0, 0.5}, {2.0 * e, 0.5}}));
  }
  return robust_contracts::TeamTechnology(std::move(costs), std::move(dists));
}

// Independent evaluation of u and the team ratio on a simplex grid, plus its
// limit at the origin (largest mean among profiles with no cost).
inline double grid_search(const robust_contracts::TeamTechnology& tech, double resolution) {
  const std::size_t n = tech.agents();
  const int steps = static_cast<int>(std::lround(1.0 / resolution));
  double best = 0.0;
  for (std::size_t p = 0; p < tech.profiles(); ++p) {
    const auto acts = tech.decode(p);
    bool free = true;
    for (std::size_t i = 0; i < n; ++i) free = free && tech.cost(i, acts[i]) == 0.0;
    if (free) best = std::max(best, tech.mean(p));
  }
  std::vector<int> idx(n, 0);
  auto evaluate = [&] {
    int used = 0;
    for (int k : idx) used += k;
    if (used == 0 || used >= steps) return;
    double u = -INFINITY;
    for (std::size_t p = 0; p < tech.profiles(); ++p) {
      const auto acts = tech.decode(p);
      double v = tech.mean(p);
      for (std::size_t i = 0; i < n; ++i) {
        const double c = tech.cost(i, acts[i]);
        if (c > 0.0) v -= idx[i] == 0 ? INFINITY : c / (idx[i] * resolution);
      }
      u = std::max(u, v);
    }
    const double s = used * resolution;
    best = std::max(best, u * s / -std::log(1.0 - s));
  };
  std::function<void(std::size_t, int)> walk = [&](std::size_t i, int left) {
    if (i == n) {
      evaluate();
      return;
    }
    for (int k = 0; k <= left; ++k) {
      idx[i] = k;
      walk(i + 1, left - k);
    }
    idx[i] = 0;
  };
  walk(0, steps);
  return best;
}

}  // namespace rc_test
