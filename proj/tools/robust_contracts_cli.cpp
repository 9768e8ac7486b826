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

// robust-contracts: solve, verify and cross-check robust linear contracts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "robust_contracts/adversary.hpp"
#include "robust_contracts/contract_programs.hpp"
#include "robust_contracts/io.hpp"
#include "robust_contracts/lagrangian.hpp"
#include "robust_contracts/single_agent.hpp"
#include "robust_contracts/team.hpp"

namespace rc = robust_contracts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitFailed = 2;

struct RunConfig {
  std::string input;
  std::string output;
  std::vector<double> grid;
  std::size_t trials = 1000;
  std::size_t contracts = 10000;
  std::optional<std::size_t> slopes;
  std::uint64_t seed = 42;
  std::optional<double> tolerance;
  double range_from = 0.01;
  double range_to = 0.99;
  double corrupt_value = 0.0;
};

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string pass_fail(bool ok) { return ok ? "PASS" : "FAIL"; }

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("robust-contracts");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ROBUST_CONTRACTS_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("ignoring ROBUST_CONTRACTS_LOG={} (use trace, debug, info, warn, error, "
                   "critical or off)",
                   env);
    } else {
      spdlog::set_level(level);
    }
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw rc::ValidationError(fmt::format("cannot write {}", path));
  return out;
}

std::string action_name(const rc::SingleInstance& inst, std::size_t i) {
  if (i == inst.technology.null_index() && inst.technology[i].is_null() &&
      i >= inst.names.size()) {
    return "null";
  }
  return i < inst.names.size() ? inst.names[i] : fmt::format("action{}", i);
}

std::string profile_name(const rc::TeamInstance& inst, std::size_t profile) {
  const auto acts = inst.technology.decode(profile);
  std::string out = "(";
  for (std::size_t i = 0; i < acts.size(); ++i) {
    out += (i ? ", " : "") + inst.action_names[i][acts[i]];
  }
  return out + ")";
}

double single_grid(const RunConfig& cfg, double fallback) {
  return cfg.grid.empty() ? fallback : cfg.grid.front();
}

std::size_t count_from(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw rc::ValidationError(fmt::format("{} must be a positive integer, got {}", what, v));
  }
  return static_cast<std::size_t>(v);
}

rc::Instance load(const RunConfig& cfg) {
  if (cfg.input.empty()) throw rc::ValidationError("--input is required");
  spdlog::info("reading {}", cfg.input);
  return rc::load_instance(cfg.input);
}

int solve_multi(const rc::MultiInstance& inst) {
  const rc::MultiOutcomeLambda lambda = rc::multi_outcome_lambda(inst.actions, inst.bound);
  const rc::MultiOutcomeContract w = rc::multi_outcome_contract(inst.actions, lambda, inst.bound);
  const rc::LagrangianReport check =
      rc::verify_lagrangian_bound(inst.actions, w, lambda.lambda_star, inst.bound);
  fmt::print("kind: multi\n");
  fmt::print("actions: {}\n", inst.actions.size());
  fmt::print("dimension: {}\n", inst.bound.dimension());
  fmt::print("lambda_star: {}\n", num(lambda.lambda_star));
  fmt::print("witness_action: {}\n", lambda.witness_action);
  fmt::print("objective: {}\n", num(lambda.objective));
  fmt::print("active_piece: {}\n", w.active_piece);
  std::string coefficients;
  for (std::size_t i = 0; i < w.tangent.size(); ++i) {
    coefficients += (i ? ", " : "") + num(w.coefficient(i));
  }
  fmt::print("contract_coefficients: [{}]\n", coefficients);
  fmt::print("payoff_bound: {}\n", num(w.payoff_bound));
  fmt::print("limited_liability_violation: {}\n", w.limited_liability_violation);
  fmt::print("lagrangian_infimum: {}\n", num(check.value));
  fmt::print("lagrangian_check: {}\n", pass_fail(check.pass));
  if (w.limited_liability_violation) {
    spdlog::warn("the tangent contract pays a negative amount on some known outcome");
  }
  return check.pass ? kExitOk : kExitFailed;
}

int cmd_solve_single(const RunConfig& cfg) {
  const rc::Instance instance = load(cfg);
  if (const auto* multi = std::get_if<rc::MultiInstance>(&instance)) return solve_multi(*multi);
  const auto* inst = std::get_if<rc::SingleInstance>(&instance);
  if (inst == nullptr) {
    throw rc::ValidationError("solve-single needs a file of kind single or multi; use solve-team");
  }
  const rc::Technology& tech = inst->technology;
  const rc::SingleAgentSolution sol = rc::critical_slope(tech);
  const rc::DeterministicOptimum det = rc::deterministic_optimum(tech);

  fmt::print("kind: single\n");
  fmt::print("actions: {}\n", tech.size());
  fmt::print("alpha_star: {}\n", num(sol.alpha_star));
  fmt::print("value: {}\n", num(sol.value));
  fmt::print("witness_action: {}\n", action_name(*inst, sol.witness_action));
  fmt::print("deterministic_slope: {}\n", num(det.slope));
  fmt::print("deterministic_payoff: {}\n", num(det.payoff));
  fmt::print("advantage_ratio: {}\n",
             det.payoff > 0.0 ? num(sol.value / det.payoff) : std::string("inf"));
  try {
    const rc::SingleOutcomeLagrangian lag = rc::single_outcome_lagrangian(tech);
    fmt::print("lagrangian_lambda: {}\n", num(lag.lambda_star));
  } catch (const rc::CornerCaseError&) {
    fmt::print("lagrangian_lambda: inf\n");
  }
  if (sol.degenerate()) {
    fmt::print("cdf: point mass at slope 0 (degenerate case)\n");
  } else {
    fmt::print("cdf: G(a) = ln(1 - a) / ln(1 - {}) on [0, {}]\n", num(sol.alpha_star),
               num(sol.alpha_star));
    fmt::print("cdf_samples:\n");
    for (int k = 0; k <= 10; ++k) {
      const double a = sol.alpha_star * k / 10.0;
      fmt::print("  {} {}\n", num(a), num(sol.cdf.cdf(a)));
    }
  }

  if (!cfg.output.empty()) {
    const std::size_t points = count_from(single_grid(cfg, 101), "--grid");
    std::ofstream out = open_output(cfg.output);
    out << "alpha,G\n";
    if (sol.degenerate()) {
      out << num(0.0) << ',' << num(1.0) << '\n';
    } else {
      for (std::size_t k = 0; k < points; ++k) {
        const double a =
            points == 1 ? sol.alpha_star
                        : sol.alpha_star * static_cast<double>(k) / static_cast<double>(points - 1);
        out << num(a) << ',' << num(sol.cdf.cdf(a)) << '\n';
      }
    }
    spdlog::info("wrote {}", cfg.output);
  }
  return kExitOk;
}

void print_contract(const rc::TabularContract& w) {
  for (const auto& [y, pay] : w.payments()) fmt::print("  w({}) = {}\n", num(y), num(pay));
}

int cmd_verify(const RunConfig& cfg) {
  const rc::Instance instance = load(cfg);
  const auto* inst = std::get_if<rc::SingleInstance>(&instance);
  if (inst == nullptr) throw rc::ValidationError("verify needs a file of kind single");
  const rc::Technology& tech = inst->technology;
  const rc::SingleAgentSolution sol = rc::critical_slope(tech);
  const double claimed = sol.value + cfg.corrupt_value;
  if (cfg.corrupt_value != 0.0) {
    spdlog::warn("test hook: checking against V + {} instead of V", cfg.corrupt_value);
  }
  fmt::print("alpha_star: {}\n", num(sol.alpha_star));
  fmt::print("value: {}\n", num(claimed));

  if (sol.degenerate()) {
    const double det = rc::deterministic_optimum(tech).payoff;
    const bool ok = std::abs(claimed - det) <= 1e-9;
    fmt::print("degenerate: alpha* = 0, the zero contract is optimal\n");
    fmt::print("deterministic_payoff: {}\n", num(det));
    fmt::print("degenerate_check: {}\n", pass_fail(ok));
    return ok ? kExitOk : kExitFailed;
  }

  bool ok = true;
  if (cfg.trials == 0) {
    fmt::print("lower_bound: skipped (trials = 0)\n");
  } else {
    const rc::LowerBoundReport lower =
        rc::verify_lower_bound(tech, cfg.trials, cfg.seed, rc::kLowerBoundTolerance);
    const bool pass = lower.min_payoff >= claimed - rc::kLowerBoundTolerance;
    fmt::print("lower_bound_trials: {}\n", lower.trials);
    fmt::print("lower_bound_min_payoff: {}\n", num(lower.min_payoff));
    fmt::print("lower_bound_worst_trial: {}\n", lower.worst_trial.value_or(0));
    fmt::print("lower_bound: {}\n", pass_fail(pass));
    ok = ok && pass;
  }

  const double tolerance = cfg.tolerance.value_or(rc::kUpperBoundTolerance);
  const auto contracts = rc::random_contract_grid(tech, sol.alpha_star, cfg.contracts, cfg.seed);
  const rc::UpperBoundReport upper =
      rc::verify_upper_bound(tech, contracts, cfg.slopes.value_or(rc::kDefaultAdversarySlopes),
                              tolerance);
  const bool pass = upper.max_payoff <= claimed + tolerance;
  fmt::print("upper_bound_contracts: {}\n", upper.contracts);
  fmt::print("upper_bound_max_payoff: {}\n", num(upper.max_payoff));
  fmt::print("upper_bound_tie_sensitive: {}\n", upper.tie_sensitive);
  fmt::print("upper_bound: {}\n", pass_fail(pass));
  if (!pass && upper.best_contract) {
    fmt::print("violating_contract: {}\n", *upper.best_contract);
    print_contract(contracts[*upper.best_contract]);
  }
  ok = ok && pass;
  return ok ? kExitOk : kExitFailed;
}

int cmd_ratio_curve(const RunConfig& cfg) {
  const double step = single_grid(cfg, 0.01);
  if (!(cfg.range_from > 0.0 && cfg.range_to < 1.0 && cfg.range_from <= cfg.range_to)) {
    throw rc::ValidationError(fmt::format("c0 range [{}, {}] must lie inside (0, 1)",
                                          cfg.range_from, cfg.range_to));
  }
  if (!(step > 0.0)) throw rc::ValidationError("--grid step must be positive");
  const auto rows =
      static_cast<std::size_t>(std::floor((cfg.range_to - cfg.range_from) / step + 1e-9)) + 1;

  std::string csv = "c0,alpha_star,randomized,deterministic,ratio\n";
  double previous = 0.0;
  bool monotone = true;
  for (std::size_t k = 0; k < rows; ++k) {
    const double c0 = cfg.range_from + static_cast<double>(k) * step;
    const double alpha = rc::solve_stationary_slope(c0);
    const double randomized = 1.0 - alpha;
    const double gap = 1.0 - std::sqrt(c0);
    const double deterministic = gap * gap;
    const double ratio = rc::advantage_ratio(c0);
    monotone = monotone && ratio >= previous;
    previous = ratio;
    csv += fmt::format("{},{},{},{},{}\n", num(c0), num(alpha), num(randomized),
                       num(deterministic), num(ratio));
  }
  if (cfg.output.empty()) {
    fmt::print("{}", csv);
  } else {
    open_output(cfg.output) << csv;
    fmt::print("rows: {}\n", rows);
    fmt::print("ratio_nondecreasing: {}\n", pass_fail(monotone));
  }
  if (!monotone) spdlog::error("ratio column is not nondecreasing");
  return monotone ? kExitOk : kExitFailed;
}

int cmd_solve_team(const RunConfig& cfg) {
  const rc::Instance instance = load(cfg);
  const auto* inst = std::get_if<rc::TeamInstance>(&instance);
  if (inst == nullptr) throw rc::ValidationError("solve-team needs a file of kind team");
  const rc::TeamTechnology& tech = inst->technology;
  const rc::TeamSolution sol = rc::team_critical_slope(tech);
  const double baseline = rc::team_deterministic_baseline(tech);

  fmt::print("kind: team\n");
  fmt::print("agents: {}\n", tech.agents());
  fmt::print("profiles: {}\n", tech.profiles());
  for (std::size_t i = 0; i < tech.agents(); ++i) {
    fmt::print("alpha_star[{}]: {}\n", inst->agent_names[i], num(sol.alpha_star[i]));
  }
  fmt::print("s_star: {}\n", num(sol.s_star));
  fmt::print("value: {}\n", num(sol.value));
  fmt::print("witness_profile: {}\n", profile_name(*inst, sol.witness_profile));
  fmt::print("deterministic_payoff: {}\n", num(baseline));
  fmt::print("advantage_ratio: {}\n",
             baseline > 0.0 ? num(sol.value / baseline) : std::string("inf"));

  bool ok = true;
  if (sol.degenerate()) {
    fmt::print("cdf: point mass at beta = 0 (degenerate case)\n");
  } else {
    fmt::print("cdf: G(b) = ln(1 - b {}) / ln(1 - {}) on [0, 1], slopes b alpha*\n",
               num(sol.s_star), num(sol.s_star));
    const rc::TeamPayoffReport payoff = rc::team_expected_payoff(tech, sol);
    fmt::print("integrated_payoff: {}\n", num(payoff.integrated));
    fmt::print("payoff_check: {}\n", pass_fail(payoff.pass));
    ok = ok && payoff.pass;
  }

  const rc::NashReport nash = rc::nash_check(tech, sol.alpha_star);
  fmt::print("nash_profile: {}\n", profile_name(*inst, nash.profile));
  fmt::print("nash_max_gain: {}\n", num(nash.max_gain));
  fmt::print("nash_check: {}\n", pass_fail(nash.is_nash));
  fmt::print("pure_equilibria: {}\n", nash.equilibria.size());
  fmt::print("best_equilibrium_payoff: {}\n", num(nash.best_equilibrium_payoff));
  fmt::print("selection_matters: {}\n", nash.selection_matters);
  if (!nash.is_nash) spdlog::error("the chosen profile is not a pure Nash equilibrium");
  ok = ok && nash.is_nash;

  if (sol.degenerate()) {
    fmt::print("p3_check: skipped (degenerate case)\n");
  } else {
    const rc::P3Report p3 = rc::p3_upper_check(tech, sol, single_grid(cfg, 1e-2), 1000, cfg.seed);
    fmt::print("p3_points: {}\n", p3.points);
    fmt::print("p3_max_shortfall: {}\n", num(p3.max_shortfall));
    fmt::print("p3_max_integrand_error: {}\n", num(p3.max_integrand_error));
    fmt::print("p3_binding_gap: {}\n", num(p3.binding_gap));
    fmt::print("p3_check: {}\n", pass_fail(p3.pass()));
    ok = ok && p3.pass();
  }

  if (!cfg.output.empty()) {
    std::ofstream out = open_output(cfg.output);
    out << "beta,G\n";
    if (sol.degenerate()) {
      out << num(0.0) << ',' << num(1.0) << '\n';
    } else {
      for (int k = 0; k <= 100; ++k) {
        const double beta = k / 100.0;
        out << num(beta) << ',' << num(sol.cdf.cdf(beta)) << '\n';
      }
    }
  }
  return ok ? kExitOk : kExitFailed;
}

int cmd_lp_check(const RunConfig& cfg) {
  std::optional<rc::SingleInstance> inst;
  if (cfg.input.empty()) {
    spdlog::info("no --input; using the single action (E = 1, c = 0.5)");
    inst = rc::SingleInstance{
        rc::Technology({rc::Action(rc::OutcomeDist::point_mass(1.0), 0.5)}), {"work"}};
  } else {
    rc::Instance instance = load(cfg);
    auto* single = std::get_if<rc::SingleInstance>(&instance);
    if (single == nullptr) throw rc::ValidationError("lp-check needs a file of kind single");
    inst = std::move(*single);
  }
  const rc::Technology& tech = inst->technology;
  const rc::SingleAgentSolution sol = rc::critical_slope(tech);
  std::vector<double> outcomes = tech.outcome_grid();
  if (outcomes.front() != 0.0) outcomes.insert(outcomes.begin(), 0.0);
  const std::vector<double> sizes = cfg.grid.empty() ? std::vector<double>{8} : cfg.grid;

  fmt::print("outcomes: {}\n", outcomes.size());
  fmt::print("value: {}\n", num(sol.value));
  std::string csv = "payments,lp_value,closed_form,gap,inner_value,iterations\n";
  bool ok = true;
  double previous_gap = std::numeric_limits<double>::infinity();
  for (double size : sizes) {
    const std::size_t n = count_from(size, "--grid");
    const std::vector<double> payments = rc::payment_grid(sol.alpha_star, outcomes.back(), n);
    rc::MaxMaxResult result;
    try {
      result = rc::solve_maxmax(tech, outcomes, payments);
    } catch (const rc::lp::DimensionLimitError& e) {
      std::size_t largest = 1;
      while (std::pow(static_cast<double>(largest + 1), static_cast<double>(outcomes.size())) <=
             static_cast<double>(rc::kDefaultContractLimit)) {
        ++largest;
      }
      throw rc::ValidationError(fmt::format(
          "{}; with {} outcomes use at most {} payment levels", e.what(), outcomes.size(),
          largest));
    }
    if (result.status != rc::lp::Status::kOptimal) {
      spdlog::error("max-max LP with {} payment levels ended with status {}", n,
                    rc::lp::to_string(result.status));
      fmt::print("lp[{}]: status {}\n", n, rc::lp::to_string(result.status));
      ok = false;
      continue;
    }
    const double inner = rc::sign_check_maxmin(tech, result.grid, result.distribution);
    const double gap = sol.value - result.value;
    const bool below = result.value <= sol.value + 1e-6;
    const bool dual = std::abs(inner - result.value) <= 1e-6;
    const bool monotone = gap <= previous_gap + 1e-9;
    previous_gap = gap;
    spdlog::info("|S| = {}: {} simplex iterations", n, result.iterations);
    fmt::print("lp[{}]: value {} gap {} inner {} bound {} duality {} refinement {}\n", n,
               num(result.value), num(gap), num(inner), pass_fail(below), pass_fail(dual),
               pass_fail(monotone));
    ok = ok && below && dual && monotone;
    csv += fmt::format("{},{},{},{},{},{}\n", n, num(result.value), num(sol.value), num(gap),
                       num(inner), result.iterations);
  }

  if (sol.degenerate()) {
    fmt::print("p1_p2: skipped (degenerate case)\n");
  } else {
    std::vector<double> alpha_grid(cfg.slopes.value_or(200));
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
      alpha_grid[i] = sol.alpha_star * static_cast<double>(i + 1) /
                      static_cast<double>(alpha_grid.size());
    }
    const rc::SlopeProgramValues pv = rc::solve_p1_p2(tech, alpha_grid, sol.cdf);
    const bool agree = std::abs(pv.p1 - pv.p2) <= 1e-6;
    fmt::print("p1: {}\n", num(pv.p1));
    fmt::print("p2: {}\n", num(pv.p2));
    fmt::print("p1_p2_agreement: {}\n", pass_fail(agree));
    ok = ok && agree;
  }
  if (!cfg.output.empty()) open_output(cfg.output) << csv;
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Robust linear contracts: solvers, verifiers and LP cross-checks"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input, "Instance file (JSON)");
    sub->add_option("--output,-o", cfg.output, "CSV output path");
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  };

  CLI::App* solve_single = app.add_subcommand("solve-single", "Optimal randomized contract for one agent");
  add_common(solve_single);
  solve_single->add_option("--grid", cfg.grid, "Number of CDF points in the CSV (default 101)")
      ->expected(1);

  CLI::App* verify = app.add_subcommand("verify", "Certify the lower and upper bounds");
  add_common(verify);
  verify->add_option("--trials", cfg.trials, "Random supersets for the lower bound")
      ->capture_default_str();
  verify->add_option("--contracts", cfg.contracts, "Random tabular contracts for the upper bound")
      ->capture_default_str();
  verify->add_option("--grid", cfg.grid, "Alias of --contracts")->expected(1);
  verify->add_option("--slopes", cfg.slopes, "Slope grid of the discretized adversary (default 2000)");
  verify->add_option("--tolerance", cfg.tolerance, "Upper-bound tolerance (default 1e-3)");
  verify->add_option("--corrupt-value", cfg.corrupt_value)->group("");

  CLI::App* ratio = app.add_subcommand("ratio-curve", "Randomized over deterministic payoff for (E = 1, c0)");
  add_common(ratio);
  ratio->add_option("--grid", cfg.grid, "Step in c0 (default 0.01)")->expected(1);
  ratio->add_option("--from", cfg.range_from, "Smallest c0")->capture_default_str();
  ratio->add_option("--to", cfg.range_to, "Largest c0")->capture_default_str();

  CLI::App* team = app.add_subcommand("solve-team", "Optimal randomized linear contract for a team");
  add_common(team);
  team->add_option("--grid", cfg.grid, "Simplex resolution of the P3 check (default 0.01)")
      ->expected(1);

  CLI::App* lp_check = app.add_subcommand("lp-check", "Max-max LP and slope programs");
  add_common(lp_check);
  lp_check->add_option("--grid", cfg.grid, "Payment levels |S|, one or more (default 8)");
  lp_check->add_option("--slopes", cfg.slopes, "Slope grid size for P1/P2 (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (cfg.tolerance && !(*cfg.tolerance > 0.0)) {
    fmt::print(stderr, "error: --tolerance must be positive\n");
    return kExitInvalid;
  }
  if (verify->parsed() && !cfg.grid.empty()) {
    cfg.contracts = count_from(cfg.grid.front(), "--grid");
  }

  try {
    if (solve_single->parsed()) return cmd_solve_single(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (ratio->parsed()) return cmd_ratio_curve(cfg);
    if (team->parsed()) return cmd_solve_team(cfg);
    if (lp_check->parsed()) return cmd_lp_check(cfg);
  } catch (const rc::ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInvalid;
  } catch (const rc::CornerCaseError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInvalid;
  } catch (const rc::InternalConsistencyError& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kExitFailed;
  }
  return kExitInvalid;
}
