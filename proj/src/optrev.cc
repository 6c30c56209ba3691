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

#include "bklab/optrev.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bklab {
namespace {

constexpr double kLazyTol = 1e-10;

TypeSpace lp_types(const ProductDist& f) {
  if (!f.all_discrete()) throw std::invalid_argument("revenue LP: items must be discrete");
  TypeSpace ts(f);
  if (ts.size() > kMaxLpTypes) {
    throw std::length_error("revenue LP: " + std::to_string(ts.size()) + " types exceed " +
                            std::to_string(kMaxLpTypes));
  }
  return ts;
}

// Members of T+ are 0 for the empty type and v+1 for type v.
LinearConstraint bic_row(const TypeSpace& ts, std::size_t a, std::size_t b) {
  LinearConstraint c;
  c.rel = Relation::kGe;
  const int m = ts.m();
  if (a > 0) {
    for (int j = 0; j < m; ++j) {
      const double va = ts.value(a - 1, j);
      if (va != 0.0) c.terms.emplace_back(lp_pi_var(ts, a - 1, j), va);
    }
    c.terms.emplace_back(lp_p_var(ts, a - 1), -1.0);
  }
  if (b > 0) {
    for (int j = 0; j < m; ++j) {
      const double va = a > 0 ? ts.value(a - 1, j) : 0.0;
      if (va != 0.0) c.terms.emplace_back(lp_pi_var(ts, b - 1, j), -va);
    }
    c.terms.emplace_back(lp_p_var(ts, b - 1), 1.0);
  }
  return c;
}

LPModel lp_skeleton(const TypeSpace& ts) {
  const std::size_t t = ts.size(), m = static_cast<std::size_t>(ts.m());
  LPModel lp(t * (m + 1));
  for (std::size_t v = 0; v < t; ++v) {
    for (int j = 0; j < ts.m(); ++j) lp.upper[lp_pi_var(ts, v, j)] = 1.0;
    const std::size_t pv = lp_p_var(ts, v);
    lp.lower[pv] = -std::numeric_limits<double>::infinity();
    lp.objective[pv] = ts.prob(v);
  }
  return lp;
}

// Utility of true type a (possibly empty) reporting b (possibly empty).
double utility(const TypeSpace& ts, const ReducedForm& rf, std::size_t a, std::size_t b) {
  if (b == 0) return 0.0;
  double u = -rf.p[b - 1];
  if (a == 0) return u;
  for (int j = 0; j < ts.m(); ++j) u += rf.pi[b - 1][j] * ts.value(a - 1, j);
  return u;
}

}  // namespace

std::size_t lp_pi_var(const TypeSpace& ts, std::size_t v, int j) {
  return v * static_cast<std::size_t>(ts.m()) + static_cast<std::size_t>(j);
}

std::size_t lp_p_var(const TypeSpace& ts, std::size_t v) {
  return ts.size() * static_cast<std::size_t>(ts.m()) + v;
}

LPModel build_single_bidder_lp(const ProductDist& f) {
  const TypeSpace ts = lp_types(f);
  LPModel lp = lp_skeleton(ts);
  const std::size_t plus = ts.size() + 1;
  lp.constraints.reserve(plus * (plus - 1));
  for (std::size_t a = 0; a < plus; ++a) {
    for (std::size_t b = 0; b < plus; ++b) {
      if (a != b) lp.constraints.push_back(bic_row(ts, a, b));
    }
  }
  return lp;
}

ReducedForm reduced_form_from_lp(const TypeSpace& ts, const std::vector<double>& x) {
  ReducedForm rf;
  rf.pi.assign(ts.size(), std::vector<double>(static_cast<std::size_t>(ts.m())));
  rf.p.resize(ts.size());
  for (std::size_t v = 0; v < ts.size(); ++v) {
    for (int j = 0; j < ts.m(); ++j) rf.pi[v][j] = std::clamp(x[lp_pi_var(ts, v, j)], 0.0, 1.0);
    rf.p[v] = x[lp_p_var(ts, v)];
  }
  return rf;
}

OptRevResult opt_rev_single(const ProductDist& f) {
  const TypeSpace ts = lp_types(f);
  const std::size_t t = ts.size();
  LPModel lp = lp_skeleton(ts);
  // Start from BIR and the one-step downward deviations.
  for (std::size_t v = 0; v < t; ++v) {
    lp.constraints.push_back(bic_row(ts, v + 1, 0));
    const auto d = ts.digits(v);
    for (int j = 0; j < ts.m(); ++j) {
      if (d[j] > 0) lp.constraints.push_back(bic_row(ts, v + 1, v - ts.stride(j) + 1));
    }
  }
  const std::size_t cap = std::max<std::size_t>(64, t);
  auto oracle = [&](const std::vector<double>& x) {
    const ReducedForm rf = reduced_form_from_lp(ts, x);
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> bad;
    for (std::size_t a = 0; a <= t; ++a) {
      const double own = utility(ts, rf, a, a);
      for (std::size_t b = 0; b <= t; ++b) {
        if (a == b) continue;
        const double gap = utility(ts, rf, a, b) - own;
        if (gap > kLazyTol) bad.push_back({gap, {a, b}});
      }
    }
    if (bad.size() > cap) {
      std::partial_sort(bad.begin(), bad.begin() + static_cast<std::ptrdiff_t>(cap), bad.end(),
                        [](const auto& x1, const auto& x2) {
                          return x1.first > x2.first ||
                                 (x1.first == x2.first && x1.second < x2.second);
                        });
      bad.resize(cap);
    }
    std::vector<LinearConstraint> rows;
    for (const auto& [gap, ab] : bad) rows.push_back(bic_row(ts, ab.first, ab.second));
    return rows;
  };
  LPModel final_model;
  const LPSolution sol = solve_lp_lazy(std::move(lp), oracle, 1000, &final_model);
  if (sol.status != LPStatus::kOptimal) {
    throw std::runtime_error(std::string("opt_rev_single: LP ") + lp_status_name(sol.status));
  }
  OptRevResult out;
  out.revenue = sol.objective;
  out.rf = reduced_form_from_lp(ts, sol.x);
  out.rows = final_model.constraints.size();
  return out;
}

double rf_revenue(const ReducedForm& rf, const TypeSpace& ts) {
  double r = 0.0;
  for (std::size_t v = 0; v < ts.size(); ++v) r += ts.prob(v) * rf.p[v];
  return r;
}

bool verify_bic(const ReducedForm& rf, const ProductDist& f, double tol) {
  const TypeSpace ts(f);
  const std::size_t t = ts.size();
  if (rf.pi.size() != t || rf.p.size() != t) return false;
  for (const auto& row : rf.pi) {
    if (row.size() != static_cast<std::size_t>(ts.m())) return false;
    for (double x : row) {
      if (!(x >= -tol && x <= 1.0 + tol)) return false;
    }
  }
  for (std::size_t a = 0; a <= t; ++a) {
    const double own = utility(ts, rf, a, a);
    for (std::size_t b = 0; b <= t; ++b) {
      if (utility(ts, rf, a, b) > own + tol) return false;
    }
  }
  return true;
}

double lagrangian_value(const FlowNetwork& fn, const ReducedForm& rf) {
  const TypeSpace& ts = fn.types;
  double l = rf_revenue(rf, ts);
  for (const auto& e : fn.edges) {
    const std::size_t b = e.to == kSink ? 0 : e.to + 1;
    l += e.weight * (utility(ts, rf, e.from + 1, e.from + 1) - utility(ts, rf, e.from + 1, b));
  }
  return l;
}

double virtual_welfare(const FlowNetwork& fn, const ReducedForm& rf) {
  const auto phi = virtual_transform(fn);
  double w = 0.0;
  for (std::size_t v = 0; v < fn.types.size(); ++v) {
    double dot = 0.0;
    for (int j = 0; j < fn.types.m(); ++j) dot += rf.pi[v][j] * phi[v][j];
    w += fn.types.prob(v) * dot;
  }
  return w;
}

double best_bundle_price_revenue(const ProductDist& f) {
  const TypeSpace ts(f);
  std::vector<std::pair<double, double>> sums(ts.size());
  for (std::size_t v = 0; v < ts.size(); ++v) {
    const auto x = ts.values(v);
    sums[v] = {std::accumulate(x.begin(), x.end(), 0.0), ts.prob(v)};
  }
  std::sort(sums.begin(), sums.end());
  // Price each distinct sum; buyers with sum >= price purchase.
  double best = 0.0, above = 1.0;
  for (std::size_t i = 0; i < sums.size();) {
    std::size_t k = i;
    double mass = 0.0;
    while (k < sums.size() && sums[k].first == sums[i].first) mass += sums[k++].second;
    best = std::max(best, sums[i].first * std::max(0.0, above));
    above -= mass;
    i = k;
  }
  return best;
}

double best_item_prices_revenue(const ProductDist& f) {
  double total = 0.0;
  for (const auto& d : f.items) {
    const DiscreteDist& x = d.discrete();
    double best = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      best = std::max(best, x.value(t) * (1.0 - x.cdf_below(t)));
    }
    total += best;
  }
  return total;
}

}  // namespace bklab
