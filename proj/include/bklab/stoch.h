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

#ifndef BKLAB_STOCH_H_
#define BKLAB_STOCH_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bklab/dist.h"
#include "bklab/estimate.h"
#include "bklab/setsys.h"

namespace bklab {

enum class VcgKind { kAdditive, kConstrained, kUnitDemand };
const char* vcg_kind_name(VcgKind k);
VcgKind parse_vcg_kind(const std::string& s);

// n i.i.d. bidders running one VCG variant.  Bidder i has constraint
// constraints[i % size]; an empty list means Full for everyone.
struct VcgSpec {
  int n = 1;
  VcgKind kind = VcgKind::kAdditive;
  std::vector<SetSystem> constraints;
};

// Sample s draws bidder-major values (bidder 0 items 0..m-1, then bidder 1,
// ...) from RandomStream(seed, s), so markets sharing a seed share their
// first bidders.
Estimate estimate_vcg_revenue(const ProductDist& f, const VcgSpec& spec, const McOptions& mc);

struct VcgComparison {
  Estimate lhs, rhs;
  Estimate diff;  // per-sample lhs - scale * rhs
};
VcgComparison compare_vcg(const ProductDist& f, const VcgSpec& lhs, const VcgSpec& rhs,
                          double scale, const McOptions& mc);

// Finite law, values strictly ascending.
struct Law {
  std::vector<double> values;
  std::vector<double> probs;

  double mean() const;
  double tail_above(double x) const;  // Pr[X > x]
  double total() const;
};
// Merges equal values and drops empty ones.
Law make_law(std::vector<std::pair<double, double>> atoms);
Law law_of(const DiscreteDist& d);

bool exact_fosd(const Law& x, const Law& y, double tol = 1e-12);

// r-th highest of ell i.i.d. draws (r = 1 is the max); 0 when r > ell.
Law kth_highest_law(const DiscreteDist& d, int ell, int r);
// Exact for discrete, Gauss-Legendre quadrature in the log-tail variable for
// the analytic families.  +inf when the expectation diverges.
double expected_kth_highest(const Distribution& d, int ell, int r);
// Integral over (0,1) of quantile(u) * w(u).
double quantile_integral(const Distribution& d, const std::function<double(double)>& w);

// Sum over items of E[second highest of n draws].
double exact_vcg_additive_revenue(const ProductDist& f, int n);

// a from F^l and b from F^k, with a_(2) = 0 when l = 1.  E is a_(1) > b_(1);
// kUniformTie instead resolves a tied maximum by a uniformly chosen draw.
enum class TopEvent { kStrict, kUniformTie };

struct OrderPairLaws {
  Law second_given_e;  // a_(2) | E
  Law fresh_second;    // c_(2), c from F^(l+k)
  double pr_e = 0.0;
};
OrderPairLaws order_pair_laws(const DiscreteDist& f, int l, int k,
                              TopEvent ev = TopEvent::kStrict);

bool check_pos_corr(const DiscreteDist& f, int l, int k);
// Law of c_(2) FOSD law of a_(2) given E.
bool check_dominance(const DiscreteDist& f, int l, int k, TopEvent ev = TopEvent::kStrict);

struct MaxFreshReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};
// Throws std::domain_error when Pr[E] = 0.
MaxFreshReport check_claim_max_fresh(const DiscreteDist& f, int l, int k);

struct PriceSweep {
  std::vector<double> prices;
  std::vector<Estimate> revenue;
  std::size_t best = 0;
};
PriceSweep bundle_pricing_revenue(const Distribution& item, int m, std::span<const double> grid,
                                  const McOptions& mc);

struct CcStep {
  int c = 0;
  Estimate revenue;
  bool pass = false;
};
struct CcResult {
  std::optional<int> c;
  std::vector<CcStep> steps;
};
// Smallest c <= c_max with VCG(n + c) - 4 se >= benchmark + 4 benchmark se.
CcResult cc_search(const ProductDist& f, const VcgSpec& base, const Estimate& benchmark,
                   int c_max, const McOptions& mc);

}  // namespace bklab

#endif  // BKLAB_STOCH_H_
