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

// Discretized contract-design programs: the joint max-max program over
// randomized tabular contracts, the inner worst-case menu program for a fixed
// contract distribution, and the one-dimensional slope programs (P1 with
// explicit costs, P2 with monotone means only).

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "robust_contracts/contract_core.hpp"
#include "robust_contracts/lp.hpp"

namespace robust_contracts {

inline constexpr std::size_t kDefaultContractLimit = 4096;

// Every contract in S^Y, in lexicographic order of payment indices with the
// first outcome varying slowest.
struct ContractGrid {
  std::vector<double> outcomes;
  std::vector<double> payments;
  std::vector<std::vector<double>> contracts;  // contracts[k][j] pays outcome j
};

/// Throws lp::DimensionLimitError when |S|^|Y| exceeds `limit`.
ContractGrid enumerate_contracts(std::span<const double> outcomes,
                                 std::span<const double> payments,
                                 std::size_t limit = kDefaultContractLimit);

/// n payment levels alpha* * max(Y) * k / (n - 1), k = 0..n-1.
std::vector<double> payment_grid(double alpha_star, double max_outcome, std::size_t n);

/// Agent's guaranteed utility under tabular contract w (indexed like
/// `outcomes`) from the known technology. Throws DomainMismatchError when a
/// known action puts mass outside `outcomes`.
double contract_u_lower(const Technology& known, std::span<const double> outcomes,
                        std::span<const double> w);

struct MaxMaxProgram {
  lp::LpProblem problem{lp::Sense::kMaximize};
  ContractGrid grid;
  std::size_t p_offset = 0;
  std::size_t lambda_offset = 0;
  std::size_t mu_offset = 0;
  std::size_t theta_offset = 0;

  std::size_t p(std::size_t w) const { return p_offset + w; }
  // Variable of lambda(w, w2), w != w2.
  std::size_t lambda(std::size_t w, std::size_t w2) const;
  std::size_t mu(std::size_t w) const { return mu_offset + w; }
  std::size_t theta(std::size_t w) const { return theta_offset + w; }
};

MaxMaxProgram build_maxmax(const Technology& known, std::span<const double> outcomes,
                           std::span<const double> payments,
                           std::size_t limit = kDefaultContractLimit);

struct MaxMaxResult {
  lp::Status status = lp::Status::kNumericalFailure;
  double value = 0.0;
  ContractGrid grid;
  std::vector<double> distribution;  // p(w) per grid contract
  std::size_t iterations = 0;
};

/// Options sized for the max-max program: |S|^2|Y| lambda columns.
lp::SimplexOptions maxmax_options();

MaxMaxResult solve_maxmax(const Technology& known, std::span<const double> outcomes,
                          std::span<const double> payments,
                          const lp::SimplexOptions& options = maxmax_options(),
                          std::size_t limit = kDefaultContractLimit);

/// Worst-case expected payoff of the contract distribution p over `grid`: the
/// adversary chooses a menu item (q(w), c(w)) for every contract subject to
/// incentive compatibility, the known-technology utility floor and
/// q(w) in the simplex. Contracts outside supp(p) are dropped; they can
/// always copy the best item of the remaining menu or of the known
/// technology, so the value is unchanged.
double sign_check_maxmin(const Technology& known, const ContractGrid& grid,
                         std::span<const double> p,
                         const lp::SimplexOptions& options = {});

/// Same program over every contract of the grid, without the support
/// restriction.
double maxmin_full(const Technology& known, const ContractGrid& grid,
                   std::span<const double> p, const lp::SimplexOptions& options = {});

struct SlopeProgramValues {
  double p1 = 0.0;
  double p2 = 0.0;
};

/// Principal's guaranteed payoff from slope masses `masses` on the increasing
/// grid `alpha_grid` subset [0, 1), where `u_values[i]` is the agent's
/// guaranteed utility at alpha_grid[i].
///   P1: min over e, c >= 0 of sum m_i (1 - a_i) e_i subject to
///       a_i e_i - c_i >= a_i e_j - c_j and a_i e_i - c_i >= u_i.
///   P2: min over nondecreasing e >= 0 of the same objective subject to
///       sum_{k <= i} (a_k - a_{k-1}) e_k >= u_i, with a_{-1} = 0.
double solve_p1(std::span<const double> alpha_grid, std::span<const double> masses,
                std::span<const double> u_values, const lp::SimplexOptions& options = {});
double solve_p2(std::span<const double> alpha_grid, std::span<const double> masses,
                std::span<const double> u_values, const lp::SimplexOptions& options = {});
SlopeProgramValues solve_p1_p2(std::span<const double> alpha_grid,
                               std::span<const double> masses,
                               std::span<const double> u_values,
                               const lp::SimplexOptions& options = {});

/// Discretizes `g` on `alpha_grid`: mass G(a_i) - G(a_{i-1}) at a_i, with any
/// remaining mass placed on the last point.
std::vector<double> discretize_cdf(const RandomizedLinearContract& g,
                                   std::span<const double> alpha_grid);

/// P1 and P2 for the known technology and a slope distribution.
SlopeProgramValues solve_p1_p2(const Technology& known, std::span<const double> alpha_grid,
                               const RandomizedLinearContract& g,
                               const lp::SimplexOptions& options = {});

}  // namespace robust_contracts
