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

#ifndef BKLAB_SIMPLEX_H_
#define BKLAB_SIMPLEX_H_

#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace bklab {

enum class Relation { kLe, kEq, kGe };

// Sparse row: sum of coef * x[var] (rel) rhs.
struct LinearConstraint {
  std::vector<std::pair<std::size_t, double>> terms;
  Relation rel = Relation::kLe;
  double rhs = 0.0;
};

// Maximize objective . x subject to constraints and lower <= x <= upper.
// Infinite bounds are allowed.
struct LPModel {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LPModel(std::size_t vars = 0)
      : objective(vars, 0.0),
        lower(vars, 0.0),
        upper(vars, std::numeric_limits<double>::infinity()) {}
  std::size_t num_vars() const { return objective.size(); }
  std::size_t add_var(double obj, double lo, double hi);
  void validate() const;
};

enum class LPStatus { kOptimal, kInfeasible, kUnbounded };
const char* lp_status_name(LPStatus s);

struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<std::size_t> basis;  // basic tableau columns, by row
  std::size_t pivots = 0;
};

inline constexpr double kPivotTol = 1e-11;

// Dense two-phase primal simplex.  Dantzig pricing; after a run of degenerate
// pivots the phase switches to Bland's rule for the rest of its iterations.
LPSolution solve_lp(const LPModel& model);

// Returns the constraints violated by x (beyond tol).  Empty means done.
using RowOracle = std::function<std::vector<LinearConstraint>(const std::vector<double>& x)>;

// Solves model, then repeatedly appends rows reported by the oracle and
// re-solves.  The final model is returned through `final_model` if non-null.
LPSolution solve_lp_lazy(LPModel model, const RowOracle& oracle, int max_rounds = 200,
                         LPModel* final_model = nullptr);

// Largest violation of any constraint or bound at x.
double max_violation(const LPModel& model, const std::vector<double>& x);

}  // namespace bklab

#endif  // BKLAB_SIMPLEX_H_
