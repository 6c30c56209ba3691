// Copyright 2026 The bklab Authors.
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

#include "bklab/simplex.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bklab {
namespace {

constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-9;
constexpr int kDegenerateRun = 50;
constexpr double kPerturb = 1e-7;
constexpr double kHarrisTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// How an original variable maps onto non-negative columns.
struct VarMap {
  enum Kind { kShift, kNegate, kSplit } kind;
  std::size_t col;
  double offset;  // x = offset + y  or  x = offset - y
};

// Column n_ holds the working (perturbed) rhs, column n_ + 1 the true rhs.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), w_(cols + 2), t_((rows + 1) * w_, 0.0), basis_(rows) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * w_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * w_ + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double& true_rhs(std::size_t i) { return at(i, n_ + 1); }
  double& cost(std::size_t j) { return at(m_, j); }  // row m_ holds -reduced costs
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const std::size_t w = w_;
    double* pr = &t_[r * w];
    const double inv = 1.0 / pr[c];
    nz_.clear();
    for (std::size_t j = 0; j < w; ++j) {
      if (pr[j] != 0.0) {
        pr[j] *= inv;
        nz_.push_back(j);
      }
    }
    pr[c] = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * w];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j : nz_) row[j] -= f * pr[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Sets the cost row for maximizing c . x under the current basis.
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j <= n_; ++j) cost(j) = j < n_ ? -c[j] : 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) cost(j) += cb * at(i, j);
    }
  }

  // Returns false if unbounded.
  bool optimize(const std::vector<bool>& allowed, std::size_t& pivots) {
    bool bland = false;
    int degenerate = 0;
    const std::size_t limit = 50 * (m_ + n_) + 10000;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > limit) throw std::runtime_error("solve_lp: iteration limit reached");
      std::size_t enter = n_;
      double best = -kCostTol;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed[j]) continue;
        const double d = cost(j);
        if (bland) {
          if (d < -kCostTol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter == n_) return true;
      std::size_t leave = m_;
      double ratio = kInf;
      if (bland) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a <= kPivotTol) continue;
          const double q = std::max(0.0, rhs(i)) / a;
          if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && basis_[i] < basis_[leave])) {
            ratio = std::min(ratio, q);
            leave = i;
          }
        }
      } else {
        // Harris: relax the bound by kHarrisTol, then take the largest pivot.
        double bound = kInf;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a > kPivotTol) bound = std::min(bound, (std::max(0.0, rhs(i)) + kHarrisTol) / a);
        }
        double big = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = at(i, enter);
          if (a <= kPivotTol) continue;
          const double q = std::max(0.0, rhs(i)) / a;
          if (q <= bound && a > big) {
            big = a;
            leave = i;
            ratio = q;
          }
        }
      }
      if (leave == m_) return false;
      if (ratio <= 1e-12) {
        if (++degenerate > kDegenerateRun) bland = true;
      } else {
        degenerate = 0;
      }
      pivot(leave, enter);
      ++pivots;
    }
  }

  void restore_rhs() {
    for (std::size_t i = 0; i < m_; ++i) rhs(i) = true_rhs(i);
  }

  // Dual simplex pivots until the rhs is non-negative.  The cost row must be
  // dual feasible.  Returns false if the primal is infeasible.
  bool dual_cleanup(const std::vector<bool>& allowed, std::size_t& pivots) {
    const std::size_t limit = 50 * (m_ + n_) + 10000;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > limit) throw std::runtime_error("solve_lp: dual iteration limit reached");
      std::size_t r = m_;
      double worst = -kFeasTol;
      for (std::size_t i = 0; i < m_; ++i) {
        if (rhs(i) < worst) {
          worst = rhs(i);
          r = i;
        }
      }
      if (r == m_) return true;
      std::size_t enter = n_;
      double ratio = kInf, size = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        const double a = at(r, j);
        if (!allowed[j] || a >= -kPivotTol) continue;
        const double q = std::max(0.0, cost(j)) / -a;
        if (q < ratio - 1e-12 || (q <= ratio + 1e-12 && -a > size)) {
          ratio = std::min(ratio, q);
          size = -a;
          enter = j;
        }
      }
      if (enter == n_) return false;
      pivot(r, enter);
      ++pivots;
    }
  }

  void drop_row(std::size_t r) {
    const std::size_t w = w_;
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r * w),
             t_.begin() + static_cast<std::ptrdiff_t>((r + 1) * w));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

 private:
  std::size_t m_, n_, w_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
};

}  // namespace

std::size_t LPModel::add_var(double obj, double lo, double hi) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  return objective.size() - 1;
}

void LPModel::validate() const {
  const std::size_t n = num_vars();
  if (lower.size() != n || upper.size() != n) {
    throw std::invalid_argument("LPModel: bound vectors do not match objective size");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isnan(lower[k]) || std::isnan(upper[k]) || lower[k] > upper[k] ||
        lower[k] == kInf || upper[k] == -kInf || !std::isfinite(objective[k])) {
      throw std::invalid_argument("LPModel: bad bounds or objective for variable " +
                                  std::to_string(k));
    }
  }
  for (const auto& c : constraints) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("LPModel: non-finite rhs");
    for (const auto& [var, coef] : c.terms) {
      if (var >= n || !std::isfinite(coef)) {
        throw std::invalid_argument("LPModel: constraint term out of range");
      }
    }
  }
}

const char* lp_status_name(LPStatus s) {
  switch (s) {
    case LPStatus::kOptimal: return "optimal";
    case LPStatus::kInfeasible: return "infeasible";
    case LPStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

LPSolution solve_lp(const LPModel& model) {
  model.validate();
  const std::size_t n = model.num_vars();

  // Non-negative columns for the original variables.
  std::vector<VarMap> map(n);
  std::size_t cols = 0;
  std::vector<std::pair<std::size_t, double>> upper_rows;  // col <= bound
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = model.lower[k], hi = model.upper[k];
    if (std::isfinite(lo)) {
      map[k] = {VarMap::kShift, cols++, lo};
      if (std::isfinite(hi)) upper_rows.emplace_back(map[k].col, hi - lo);
    } else if (std::isfinite(hi)) {
      map[k] = {VarMap::kNegate, cols++, hi};
    } else {
      map[k] = {VarMap::kSplit, cols, 0.0};
      cols += 2;
    }
  }
  const std::size_t structural = cols;

  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(model.constraints.size() + upper_rows.size());
  for (const auto& c : model.constraints) {
    Row r{{}, c.rel, c.rhs};
    for (const auto& [var, coef] : c.terms) {
      if (coef == 0.0) continue;
      const VarMap& vm = map[var];
      switch (vm.kind) {
        case VarMap::kShift:
          r.terms.emplace_back(vm.col, coef);
          r.rhs -= coef * vm.offset;
          break;
        case VarMap::kNegate:
          r.terms.emplace_back(vm.col, -coef);
          r.rhs -= coef * vm.offset;
          break;
        case VarMap::kSplit:
          r.terms.emplace_back(vm.col, coef);
          r.terms.emplace_back(vm.col + 1, -coef);
          break;
      }
    }
    rows.push_back(std::move(r));
  }
  for (const auto& [col, bound] : upper_rows) rows.push_back({{{col, 1.0}}, Relation::kLe, bound});

  // Flip rows to non-negative rhs, then count slacks and artificials.  A
  // homogeneous >= row flips too, so its slack can start in the basis.
  std::size_t slacks = 0, artificials = 0;
  for (auto& r : rows) {
    if (r.rhs < 0 || (r.rhs == 0 && r.rel == Relation::kGe)) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.second = -t.second;
      if (r.rel == Relation::kLe) r.rel = Relation::kGe;
      else if (r.rel == Relation::kGe) r.rel = Relation::kLe;
    }
    if (r.rel != Relation::kEq) ++slacks;
    if (r.rel != Relation::kLe) ++artificials;
  }
  const std::size_t total = structural + slacks + artificials;
  const std::size_t first_art = structural + slacks;
  Tableau tab(rows.size(), total);
  std::size_t s = structural, a = first_art;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [col, coef] : rows[i].terms) tab.at(i, col) += coef;
    // Inequalities are relaxed by distinct tiny amounts against degeneracy.
    const double b = rows[i].rhs;
    const double eps = kPerturb * (1.0 + b) * (0.5 + std::fmod(0.6180339887498949 * i, 1.0));
    tab.true_rhs(i) = b;
    if (rows[i].rel == Relation::kLe) tab.rhs(i) = b + eps;
    else if (rows[i].rel == Relation::kGe) tab.rhs(i) = b - std::min(eps, 0.5 * b);
    else tab.rhs(i) = b;
    switch (rows[i].rel) {
      case Relation::kLe:
        tab.at(i, s) = 1.0;
        tab.basis()[i] = s++;
        break;
      case Relation::kGe:
        tab.at(i, s++) = -1.0;
        tab.at(i, a) = 1.0;
        tab.basis()[i] = a++;
        break;
      case Relation::kEq:
        tab.at(i, a) = 1.0;
        tab.basis()[i] = a++;
        break;
    }
  }

  LPSolution sol;
  std::vector<bool> allowed(total, true);
  if (artificials > 0) {
    std::vector<double> c1(total, 0.0);
    for (std::size_t j = first_art; j < total; ++j) c1[j] = -1.0;
    tab.price(c1);
    tab.optimize(allowed, sol.pivots);
    double scale = 1.0;
    for (const auto& r : rows) scale = std::max(scale, std::fabs(r.rhs));
    if (tab.cost(total) < -kFeasTol * scale) {
      sol.status = LPStatus::kInfeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < first_art) {
        ++i;
        continue;
      }
      std::size_t c = first_art;
      double big = 1e-9;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::fabs(tab.at(i, j)) > big) {
          big = std::fabs(tab.at(i, j));
          c = j;
        }
      }
      if (c == first_art) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, c);
        ++sol.pivots;
        ++i;
      }
    }
    for (std::size_t j = first_art; j < total; ++j) allowed[j] = false;
  }

  std::vector<double> c2(total, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double ck = model.objective[k];
    const VarMap& vm = map[k];
    if (vm.kind == VarMap::kShift) c2[vm.col] = ck;
    else if (vm.kind == VarMap::kNegate) c2[vm.col] = -ck;
    else {
      c2[vm.col] = ck;
      c2[vm.col + 1] = -ck;
    }
  }
  tab.price(c2);
  if (!tab.optimize(allowed, sol.pivots)) {
    sol.status = LPStatus::kUnbounded;
    return sol;
  }
  tab.restore_rhs();
  tab.price(c2);
  if (!tab.dual_cleanup(allowed, sol.pivots)) {
    sol.status = LPStatus::kInfeasible;
    return sol;
  }
  if (!tab.optimize(allowed, sol.pivots)) {
    sol.status = LPStatus::kUnbounded;
    return sol;
  }

  std::vector<double> y(total, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i) y[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  sol.x.resize(n);
  sol.objective = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const VarMap& vm = map[k];
    switch (vm.kind) {
      case VarMap::kShift: sol.x[k] = vm.offset + y[vm.col]; break;
      case VarMap::kNegate: sol.x[k] = vm.offset - y[vm.col]; break;
      case VarMap::kSplit: sol.x[k] = y[vm.col] - y[vm.col + 1]; break;
    }
    sol.objective += model.objective[k] * sol.x[k];
  }
  sol.basis = tab.basis();
  sol.status = LPStatus::kOptimal;
  return sol;
}

double max_violation(const LPModel& model, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t k = 0; k < model.num_vars(); ++k) {
    worst = std::max({worst, model.lower[k] - x[k], x[k] - model.upper[k]});
  }
  for (const auto& c : model.constraints) {
    double lhs = 0.0;
    for (const auto& [var, coef] : c.terms) lhs += coef * x[var];
    const double d = lhs - c.rhs;
    if (c.rel == Relation::kLe) worst = std::max(worst, d);
    else if (c.rel == Relation::kGe) worst = std::max(worst, -d);
    else worst = std::max(worst, std::fabs(d));
  }
  return worst;
}

LPSolution solve_lp_lazy(LPModel model, const RowOracle& oracle, int max_rounds,
                         LPModel* final_model) {
  LPSolution sol;
  for (int round = 0;; ++round) {
    sol = solve_lp(model);
    if (sol.status != LPStatus::kOptimal) break;
    auto extra = oracle(sol.x);
    if (extra.empty()) break;
    if (round == max_rounds) throw std::runtime_error("solve_lp_lazy: too many rounds");
    for (auto& c : extra) model.constraints.push_back(std::move(c));
  }
  if (final_model) *final_model = std::move(model);
  return sol;
}

}  // namespace bklab
