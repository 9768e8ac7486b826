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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "robust_contracts/lp.hpp"

namespace robust_contracts::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kIterationLimit: return "iteration_limit";
    case Status::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

std::size_t LpProblem::add_variable(double objective, double lower, double upper,
                                    std::string name) {
  if (!std::isfinite(objective) || std::isnan(lower) || std::isnan(upper) ||
      lower == kInfinity || upper == -kInfinity) {
    throw std::invalid_argument("variable has non-finite objective or bad bounds");
  }
  variables_.push_back({objective, lower, upper, std::move(name)});
  return variables_.size() - 1;
}

std::size_t LpProblem::add_row(std::vector<Term> terms, Relation relation, double rhs,
                               std::string name) {
  add_row(Row{std::move(terms), relation, rhs, std::move(name)});
  return rows_.size() - 1;
}

void LpProblem::add_row(Row row) {
  if (!std::isfinite(row.rhs)) throw std::invalid_argument("row has non-finite rhs");
  for (const Term& t : row.terms) {
    if (t.var >= variables_.size()) {
      throw std::out_of_range(fmt::format("row references unknown variable {}", t.var));
    }
    if (!std::isfinite(t.coef)) throw std::invalid_argument("row has non-finite coefficient");
  }
  rows_.push_back(std::move(row));
}

double LpProblem::objective_value(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) total += variables_[j].objective * x[j];
  return total;
}

double LpProblem::row_activity(std::size_t i, std::span<const double> x) const {
  double total = 0.0;
  for (const Term& t : rows_.at(i).terms) total += t.coef * x[t.var];
  return total;
}

double LpProblem::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    worst = std::max(worst, variables_[j].lower - x[j]);
    worst = std::max(worst, x[j] - variables_[j].upper);
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double lhs = row_activity(i, x);
    const double rhs = rows_[i].rhs;
    switch (rows_[i].relation) {
      case Relation::kLessEqual: worst = std::max(worst, lhs - rhs); break;
      case Relation::kGreaterEqual: worst = std::max(worst, rhs - lhs); break;
      case Relation::kEqual: worst = std::max(worst, std::abs(lhs - rhs)); break;
    }
  }
  return worst;
}

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Entry {
  std::size_t row;
  double value;
};

// x_original = offset + sign * x[col] - x[neg_col]
struct VariableMap {
  std::size_t col = kNone;
  std::size_t neg_col = kNone;
  double sign = 1.0;
  double offset = 0.0;
};

// min cost.x  s.t.  A x = b, x >= 0, b >= 0.
struct StandardForm {
  std::size_t rows = 0;
  std::vector<std::vector<Entry>> columns;
  std::vector<double> cost;
  std::vector<double> b;
  std::vector<char> artificial;
  std::vector<std::size_t> initial_basis;
  std::vector<VariableMap> maps;
  bool trivially_infeasible = false;
};

std::size_t new_column(StandardForm& sf, double cost, bool artificial = false) {
  sf.columns.emplace_back();
  sf.cost.push_back(cost);
  sf.artificial.push_back(artificial ? 1 : 0);
  return sf.columns.size() - 1;
}

StandardForm to_standard_form(const LpProblem& problem) {
  StandardForm sf;
  const double sense = problem.sense() == Sense::kMaximize ? -1.0 : 1.0;
  struct PendingRow {
    std::vector<std::pair<std::size_t, double>> coefs;
    Relation relation;
    double rhs;
  };
  std::vector<PendingRow> pending;

  sf.maps.resize(problem.num_variables());
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(j);
    const double c = sense * v.objective;
    VariableMap& map = sf.maps[j];
    if (v.lower > v.upper) sf.trivially_infeasible = true;
    if (std::isfinite(v.lower)) {
      map.col = new_column(sf, c);
      map.offset = v.lower;
      if (std::isfinite(v.upper)) {
        pending.push_back({{{map.col, 1.0}}, Relation::kLessEqual, v.upper - v.lower});
      }
    } else if (std::isfinite(v.upper)) {
      map.col = new_column(sf, -c);
      map.sign = -1.0;
      map.offset = v.upper;
    } else {
      map.col = new_column(sf, c);
      map.neg_col = new_column(sf, -c);
    }
  }

  std::vector<PendingRow> rows;
  rows.reserve(problem.num_rows() + pending.size());
  for (const Row& row : problem.rows()) {
    PendingRow out{{}, row.relation, row.rhs};
    std::vector<Term> terms = row.terms;
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    for (std::size_t k = 0; k < terms.size();) {
      const std::size_t var = terms[k].var;
      double coef = 0.0;
      for (; k < terms.size() && terms[k].var == var; ++k) coef += terms[k].coef;
      if (coef == 0.0) continue;
      const VariableMap& map = sf.maps[var];
      out.rhs -= coef * map.offset;
      out.coefs.emplace_back(map.col, coef * map.sign);
      if (map.neg_col != kNone) out.coefs.emplace_back(map.neg_col, -coef);
    }
    rows.push_back(std::move(out));
  }
  for (PendingRow& row : pending) rows.push_back(std::move(row));

  sf.rows = rows.size();
  sf.b.resize(sf.rows);
  sf.initial_basis.resize(sf.rows);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    PendingRow& row = rows[i];
    double flip = row.rhs < 0.0 ? -1.0 : 1.0;
    sf.b[i] = flip * row.rhs;
    for (const auto& [col, coef] : row.coefs) sf.columns[col].push_back({i, flip * coef});
    double slack_sign = 0.0;
    if (row.relation == Relation::kLessEqual) slack_sign = flip;
    if (row.relation == Relation::kGreaterEqual) slack_sign = -flip;
    if (slack_sign != 0.0) {
      const std::size_t s = new_column(sf, 0.0);
      sf.columns[s].push_back({i, slack_sign});
      if (slack_sign > 0.0) {
        sf.initial_basis[i] = s;
        continue;
      }
    }
    const std::size_t a = new_column(sf, 0.0, /*artificial=*/true);
    sf.columns[a].push_back({i, 1.0});
    sf.initial_basis[i] = a;
  }
  return sf;
}

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardForm& sf, const SimplexOptions& options)
      : sf_(sf),
        options_(options),
        m_(sf.rows),
        n_(sf.columns.size()),
        basis_(sf.initial_basis),
        is_basic_(n_, 0),
        binv_(m_ * m_, 0.0),
        b_(sf.b),
        xb_(sf.b),
        y_(m_, 0.0),
        u_(m_, 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      is_basic_[basis_[i]] = 1;
      binv_[i * m_ + i] = 1.0;  // initial basis columns are unit vectors
    }
  }

  std::size_t iterations() const { return iterations_; }

  bool has_basic_artificial_mass(double tolerance) const {
    double total = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (sf_.artificial[basis_[i]]) total += std::max(0.0, xb_[i]);
    }
    return total > tolerance;
  }

  Status optimize(const std::vector<double>& cost, bool pin_artificials) {
    cost_ = &cost;
    pin_artificials_ = pin_artificials;
    compute_duals();
    std::size_t degenerate_run = 0;
    std::size_t since_refactor = 0;
    while (true) {
      if (iterations_ >= options_.max_iterations) return Status::kIterationLimit;
      if (since_refactor >= options_.refactor_interval) {
        if (!reinvert()) return Status::kNumericalFailure;
        since_refactor = 0;
      }
      const bool bland = options_.bland_only || degenerate_run >= options_.degenerate_limit;
      double reduced = 0.0;
      const std::size_t entering = price(bland, reduced);
      if (entering == kNone) {
        // Confirm optimality against a fresh factorization.
        if (since_refactor == 0) return Status::kOptimal;
        if (!reinvert()) return Status::kNumericalFailure;
        since_refactor = 0;
        if (price(bland, reduced) == kNone) return Status::kOptimal;
        continue;
      }
      ftran(entering);
      const std::size_t leave = ratio_test(bland);
      if (leave == kNone) return Status::kUnbounded;
      const double step = std::max(0.0, xb_[leave]) / u_[leave];
      pivot(entering, leave, step, reduced);
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
      ++iterations_;
      ++since_refactor;
    }
  }

  // Pivots basic artificials out of the basis where a structural column can
  // replace them; rows where none can are redundant and keep the artificial
  // pinned at zero.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!sf_.artificial[basis_[r]]) continue;
      std::size_t best = kNone;
      double best_abs = 1e-7;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j] || sf_.artificial[j]) continue;
        double rho = 0.0;
        for (const Entry& e : sf_.columns[j]) rho += binv_[r * m_ + e.row] * e.value;
        if (std::abs(rho) > best_abs) {
          best_abs = std::abs(rho);
          best = j;
        }
      }
      if (best == kNone) continue;
      ftran(best);
      pivot(best, r, 0.0, 0.0);
    }
  }

  // Relaxes every row whose initial basic column is a slack by a small
  // random amount so that ties in the ratio test become rare.
  void perturb(double scale) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> jitter(0.5, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (sf_.artificial[sf_.initial_basis[i]]) continue;
      const double delta = scale * (1.0 + std::abs(sf_.b[i])) * jitter(rng);
      b_[i] += delta;
      xb_[i] += delta;  // the initial basis is the identity
    }
  }

  // Restores the unperturbed right-hand side and repairs primal feasibility
  // with dual simplex pivots; the basis stays dual feasible throughout.
  Status restore_and_repair() {
    b_ = sf_.b;
    if (!reinvert()) return Status::kNumericalFailure;
    const double tol = options_.feasibility_tolerance;
    std::vector<double> rho(m_);
    while (true) {
      if (iterations_ >= options_.max_iterations) return Status::kIterationLimit;
      std::size_t r = kNone;
      double worst = -tol;
      for (std::size_t i = 0; i < m_; ++i) {
        const bool pinned = sf_.artificial[basis_[i]];
        const double infeasibility = pinned ? -std::abs(xb_[i]) : xb_[i];
        if (infeasibility < worst) {
          worst = infeasibility;
          r = i;
        }
      }
      if (r == kNone) return Status::kOptimal;
      const double sign = xb_[r] < 0.0 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < m_; ++k) rho[k] = sign * binv_[r * m_ + k];
      std::size_t entering = kNone;
      double best_ratio = kInfinity;
      double best_alpha = 0.0;
      double entering_reduced = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic_[j] || sf_.artificial[j]) continue;
        double alpha = 0.0;
        for (const Entry& e : sf_.columns[j]) alpha += rho[e.row] * e.value;
        if (alpha >= -options_.pivot_tolerance) continue;
        double d = (*cost_)[j];
        for (const Entry& e : sf_.columns[j]) d -= y_[e.row] * e.value;
        const double ratio = std::max(0.0, d) / -alpha;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && -alpha > best_alpha)) {
          best_ratio = std::min(best_ratio, ratio);
          best_alpha = -alpha;
          entering = j;
          entering_reduced = d;
        }
      }
      if (entering == kNone) return Status::kInfeasible;
      ftran(entering);
      pivot(entering, r, xb_[r] / u_[r], entering_reduced);
      ++iterations_;
    }
  }

  bool reinvert() {
    std::vector<double> a(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (const Entry& e : sf_.columns[basis_[i]]) a[e.row * m_ + i] = e.value;
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t p = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(a[r * m_ + c]) > std::abs(a[p * m_ + c])) p = r;
      }
      if (std::abs(a[p * m_ + c]) < 1e-13) return false;
      if (p != c) {
        std::swap_ranges(a.begin() + p * m_, a.begin() + (p + 1) * m_, a.begin() + c * m_);
        std::swap_ranges(inv.begin() + p * m_, inv.begin() + (p + 1) * m_,
                         inv.begin() + c * m_);
      }
      const double scale = 1.0 / a[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        a[c * m_ + k] *= scale;
        inv[c * m_ + k] *= scale;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = a[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = c; k < m_; ++k) a[r * m_ + k] -= f * a[c * m_ + k];
        for (std::size_t k = 0; k < m_; ++k) inv[r * m_ + k] -= f * inv[c * m_ + k];
      }
    }
    binv_ = std::move(inv);
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k < m_; ++k) v += binv_[i * m_ + k] * b_[k];
      xb_[i] = v;
    }
    if (cost_ != nullptr) compute_duals();
    return true;
  }

  std::vector<double> standard_solution() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) x[basis_[i]] = xb_[i];
    return x;
  }

 private:
  void compute_duals() {
    std::fill(y_.begin(), y_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double c = (*cost_)[basis_[i]];
      if (c == 0.0) continue;
      const double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) y_[k] += c * row[k];
    }
  }

  std::size_t price(bool bland, double& reduced) const {
    std::size_t best = kNone;
    double best_d = -options_.optimality_tolerance;
    for (std::size_t j = 0; j < n_; ++j) {
      if (is_basic_[j] || sf_.artificial[j]) continue;
      double d = (*cost_)[j];
      for (const Entry& e : sf_.columns[j]) d -= y_[e.row] * e.value;
      if (d < best_d) {
        best_d = d;
        best = j;
        if (bland) break;
      }
    }
    reduced = best_d;
    return best;
  }

  void ftran(std::size_t col) {
    std::fill(u_.begin(), u_.end(), 0.0);
    for (const Entry& e : sf_.columns[col]) {
      for (std::size_t i = 0; i < m_; ++i) u_[i] += binv_[i * m_ + e.row] * e.value;
    }
  }

  // Bland mode: textbook minimum ratio, smallest basic index on ties.
  // Otherwise a two-pass Harris test: bound the step with rows relaxed by the
  // feasibility tolerance, then take the largest pivot among rows whose exact
  // ratio fits under that bound.
  std::size_t ratio_test(bool bland) const {
    const double relax = options_.feasibility_tolerance;
    auto eligible = [&](std::size_t i, double& ratio, double& bound) {
      if (pin_artificials_ && sf_.artificial[basis_[i]]) {
        // Artificials left in the basis mark redundant rows and stay at 0.
        if (std::abs(u_[i]) <= options_.pivot_tolerance) return false;
        ratio = 0.0;
        bound = relax / std::abs(u_[i]);
        return true;
      }
      if (u_[i] <= options_.pivot_tolerance) return false;
      ratio = std::max(0.0, xb_[i]) / u_[i];
      bound = (std::max(0.0, xb_[i]) + relax) / u_[i];
      return true;
    };

    std::size_t leave = kNone;
    double ratio = 0.0, bound = 0.0;
    if (bland) {
      double best_ratio = kInfinity;
      for (std::size_t i = 0; i < m_; ++i) {
        if (!eligible(i, ratio, bound)) continue;
        if (leave == kNone || ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      return leave;
    }
    double limit = kInfinity;
    for (std::size_t i = 0; i < m_; ++i) {
      if (eligible(i, ratio, bound)) limit = std::min(limit, bound);
    }
    if (limit == kInfinity) return kNone;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!eligible(i, ratio, bound) || ratio > limit) continue;
      if (leave == kNone || std::abs(u_[i]) > std::abs(u_[leave])) leave = i;
    }
    return leave;
  }

  void pivot(std::size_t entering, std::size_t r, double step, double reduced) {
    for (std::size_t i = 0; i < m_; ++i) xb_[i] -= step * u_[i];
    xb_[r] = step;

    double* pivot_row = &binv_[r * m_];
    const double inv_pivot = 1.0 / u_[r];
    for (std::size_t k = 0; k < m_; ++k) pivot_row[k] *= inv_pivot;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || u_[i] == 0.0) continue;
      const double f = u_[i];
      double* row = &binv_[i * m_];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * pivot_row[k];
    }
    is_basic_[basis_[r]] = 0;
    is_basic_[entering] = 1;
    basis_[r] = entering;
    if (cost_ != nullptr && reduced != 0.0) {
      for (std::size_t k = 0; k < m_; ++k) y_[k] += reduced * pivot_row[k];
    }
  }

  const StandardForm& sf_;
  const SimplexOptions& options_;
  std::size_t m_;
  std::size_t n_;
  std::vector<std::size_t> basis_;
  std::vector<char> is_basic_;
  std::vector<double> binv_;
  std::vector<double> b_;
  std::vector<double> xb_;
  std::vector<double> y_;
  std::vector<double> u_;
  const std::vector<double>* cost_ = nullptr;
  std::size_t iterations_ = 0;
  bool pin_artificials_ = false;
};

}  // namespace

LpSolution simplex_solve(const LpProblem& problem, const SimplexOptions& options) {
  if (problem.num_variables() > options.max_variables ||
      problem.num_rows() > options.max_rows) {
    throw DimensionLimitError(fmt::format(
        "LP has {} variables x {} rows; limits are {} x {}", problem.num_variables(),
        problem.num_rows(), options.max_variables, options.max_rows));
  }
  LpSolution solution;
  const StandardForm sf = to_standard_form(problem);
  if (sf.trivially_infeasible) {
    solution.status = Status::kInfeasible;
    return solution;
  }

  RevisedSimplex simplex(sf, options);
  if (options.perturbation > 0.0) simplex.perturb(options.perturbation);
  std::vector<double> phase1_cost(sf.columns.size(), 0.0);
  bool needs_phase1 = false;
  for (std::size_t j = 0; j < sf.columns.size(); ++j) {
    if (sf.artificial[j]) {
      phase1_cost[j] = 1.0;
      needs_phase1 = true;
    }
  }
  if (needs_phase1) {
    const Status status = simplex.optimize(phase1_cost, false);
    if (status != Status::kOptimal) {
      solution.status = status == Status::kUnbounded ? Status::kNumericalFailure : status;
      solution.iterations = simplex.iterations();
      return solution;
    }
    if (simplex.has_basic_artificial_mass(options.certify_tolerance)) {
      solution.status = Status::kInfeasible;
      solution.iterations = simplex.iterations();
      return solution;
    }
    simplex.drive_out_artificials();
  }

  solution.status = simplex.optimize(sf.cost, true);
  if (solution.status == Status::kOptimal && options.perturbation > 0.0) {
    solution.status = simplex.restore_and_repair();
    if (solution.status == Status::kOptimal) solution.status = simplex.optimize(sf.cost, true);
  }
  solution.iterations = simplex.iterations();
  if (solution.status != Status::kOptimal) return solution;

  auto recover = [&](const std::vector<double>& xs) {
    std::vector<double> x(problem.num_variables());
    for (std::size_t j = 0; j < x.size(); ++j) {
      const VariableMap& map = sf.maps[j];
      x[j] = map.offset + map.sign * xs[map.col];
      if (map.neg_col != kNone) x[j] -= xs[map.neg_col];
    }
    return x;
  };
  solution.primal = recover(simplex.standard_solution());
  solution.max_violation = problem.max_violation(solution.primal);
  if (solution.max_violation > options.certify_tolerance && simplex.reinvert()) {
    solution.primal = recover(simplex.standard_solution());
    solution.max_violation = problem.max_violation(solution.primal);
  }
  if (solution.max_violation > options.certify_tolerance) {
    solution.status = Status::kNumericalFailure;
  }
  solution.value = problem.objective_value(solution.primal);
  return solution;
}

LpSolution solve_with_lazy_rows(LpProblem problem, const RowSeparator& separator,
                                const SimplexOptions& options, std::size_t max_rounds) {
  std::size_t total_iterations = 0;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    LpSolution solution = simplex_solve(problem, options);
    total_iterations += solution.iterations;
    solution.iterations = total_iterations;
    if (!solution.optimal()) return solution;
    std::vector<Row> violated = separator(solution.primal);
    if (violated.empty()) return solution;
    for (Row& row : violated) problem.add_row(std::move(row));
  }
  LpSolution solution;
  solution.status = Status::kIterationLimit;
  solution.iterations = total_iterations;
  return solution;
}

namespace {

std::string lp_name(const LpProblem& problem, std::size_t j) {
  const std::string& name = problem.variable(j).name;
  if (name.empty()) return fmt::format("x{}", j);
  std::string out;
  for (char c : name) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  }
  if (std::isdigit(static_cast<unsigned char>(out.front()))) out.insert(out.begin(), 'v');
  return out;
}

void append_terms(std::ostringstream& out, const LpProblem& problem,
                  std::span<const Term> terms) {
  if (terms.empty()) {
    out << " 0 " << lp_name(problem, 0);
    return;
  }
  for (const Term& t : terms) {
    out << ' ' << (t.coef < 0 ? "- " : "+ ") << fmt::format("{:.17g}", std::abs(t.coef))
        << ' ' << lp_name(problem, t.var);
  }
}

}  // namespace

std::string export_text(const LpProblem& problem) {
  std::ostringstream out;
  out << (problem.sense() == Sense::kMaximize ? "Maximize" : "Minimize") << "\n obj:";
  std::vector<Term> objective;
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    if (problem.variable(j).objective != 0.0) {
      objective.push_back({j, problem.variable(j).objective});
    }
  }
  if (problem.num_variables() > 0) append_terms(out, problem, objective);
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < problem.num_rows(); ++i) {
    const Row& row = problem.row(i);
    out << ' ' << (row.name.empty() ? fmt::format("r{}", i) : row.name) << ':';
    append_terms(out, problem, row.terms);
    const char* rel = row.relation == Relation::kLessEqual
                          ? "<="
                          : (row.relation == Relation::kEqual ? "=" : ">=");
    out << ' ' << rel << ' ' << fmt::format("{:.17g}", row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const Variable& v = problem.variable(j);
    const std::string name = lp_name(problem, j);
    if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << ' ' << name << " free\n";
    } else if (!std::isfinite(v.upper)) {
      if (v.lower != 0.0) out << ' ' << name << " >= " << fmt::format("{:.17g}", v.lower) << '\n';
    } else {
      out << ' '
          << (std::isfinite(v.lower) ? fmt::format("{:.17g}", v.lower) : std::string("-inf"))
          << " <= " << name << " <= " << fmt::format("{:.17g}", v.upper) << '\n';
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace robust_contracts::lp
