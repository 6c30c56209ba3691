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

#ifndef BKLAB_OPTREV_H_
#define BKLAB_OPTREV_H_

#include <cstddef>
#include <vector>

#include "bklab/dist.h"
#include "bklab/duality.h"
#include "bklab/simplex.h"
#include "bklab/typespace.h"

namespace bklab {

inline constexpr std::size_t kMaxLpTypes = 5000;

// Single additive bidder, types indexed as in TypeSpace.  The empty type
// (pi = 0, p = 0) is implicit.
struct ReducedForm {
  std::vector<std::vector<double>> pi;  // per type, m-vector
  std::vector<double> p;
};

// Variable layout of the revenue LP: pi_j(v) at v*m + j, p(v) at |T|*m + v.
std::size_t lp_pi_var(const TypeSpace& ts, std::size_t v, int j);
std::size_t lp_p_var(const TypeSpace& ts, std::size_t v);

// pi in [0,1], p free, and one BIC row per ordered pair of distinct members
// of T plus the empty type.
LPModel build_single_bidder_lp(const ProductDist& f);

struct OptRevResult {
  double revenue = 0.0;
  ReducedForm rf;
  std::size_t rows = 0;  // BIC rows in the final lazily grown model
};

// Same optimum as solving build_single_bidder_lp, but BIC rows are added
// only when violated.
OptRevResult opt_rev_single(const ProductDist& f);

ReducedForm reduced_form_from_lp(const TypeSpace& ts, const std::vector<double>& x);

double rf_revenue(const ReducedForm& rf, const TypeSpace& ts);

bool verify_bic(const ReducedForm& rf, const ProductDist& f, double tol = 1e-8);

// L(lambda, pi, p) evaluated term by term from the flow's edges.
double lagrangian_value(const FlowNetwork& fn, const ReducedForm& rf);

// Sum over types of f(v) pi(v) . Phi(v).
double virtual_welfare(const FlowNetwork& fn, const ReducedForm& rf);

// Exhaustive posted-price baselines over support values and sums.
double best_bundle_price_revenue(const ProductDist& f);
double best_item_prices_revenue(const ProductDist& f);

}  // namespace bklab

#endif  // BKLAB_OPTREV_H_
