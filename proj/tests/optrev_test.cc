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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "bklab/random.h"

namespace bklab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DiscreteDist random_dist(RandomStream& r, int max_support) {
  const int s = 1 + static_cast<int>(r.below(max_support));
  std::vector<double> v, p;
  double acc = 0, tot = 0;
  for (int t = 0; t < s; ++t) {
    acc += 1 + static_cast<double>(r.below(5));
    v.push_back(acc);
    p.push_back(0.05 + r.uniform01());
    tot += p.back();
  }
  for (auto& x : p) x /= tot;
  return DiscreteDist(v, p);
}

ProductDist random_product(RandomStream& r, int m, int max_support) {
  std::vector<Distribution> items;
  for (int j = 0; j < m; ++j) items.emplace_back(random_dist(r, max_support));
  return ProductDist(items);
}

// Deterministic menus for two items: item prices a, b and bundle price c,
// each a support value (or sum) or withheld.  Ties go to the pricier option.
double menu_grid_oracle(const ProductDist& f) {
  const auto& d0 = f.items[0].discrete();
  const auto& d1 = f.items[1].discrete();
  std::vector<double> pa(d0.values()), pb(d1.values()), pc;
  pa.push_back(kInf);
  pb.push_back(kInf);
  for (double x : d0.values())
    for (double y : d1.values()) pc.push_back(x + y);
  pc.push_back(kInf);
  double best = 0;
  for (double a : pa)
    for (double b : pb)
      for (double c : pc) {
        double rev = 0;
        for (std::size_t s = 0; s < d0.size(); ++s)
          for (std::size_t t = 0; t < d1.size(); ++t) {
            const double x = d0.value(s), y = d1.value(t);
            struct Opt { double u, pay; } opts[] = {
                {0, 0}, {x - a, a}, {y - b, b}, {x + y - a - b, a + b}, {x + y - c, c}};
            Opt pick = opts[0];
            for (const auto& o : opts) {
              if (std::isinf(o.pay)) continue;
              if (o.u > pick.u + 1e-12 || (o.u > pick.u - 1e-12 && o.pay > pick.pay)) pick = o;
            }
            rev += d0.prob(s) * d1.prob(t) * pick.pay;
          }
        best = std::max(best, rev);
      }
  return best;
}

TEST(RevenueLp, Counting) {
  auto lp1 = build_single_bidder_lp(ProductDist({DiscreteDist::uniform({1, 2})}));
  EXPECT_EQ(lp1.num_vars(), 4u);
  EXPECT_EQ(lp1.constraints.size(), 6u);
  auto lp2 = build_single_bidder_lp(ProductDist::iid(DiscreteDist::uniform({1, 2}), 2));
  EXPECT_EQ(lp2.num_vars(), 12u);
  EXPECT_EQ(lp2.constraints.size(), 20u);
  EXPECT_EQ(max_violation(lp2, std::vector<double>(12, 0.0)), 0.0);
}

TEST(RevenueLp, SizeLimit) {
  auto big = ProductDist::iid(DiscreteDist::uniform({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), 4);
  EXPECT_THROW(build_single_bidder_lp(big), std::length_error);
  EXPECT_THROW(opt_rev_single(big), std::length_error);
  EXPECT_THROW(opt_rev_single(ProductDist({EqualRevenueCapped{4}})), std::invalid_argument);
}

TEST(RevenueLp, SmallExamples) {
  ProductDist two({DiscreteDist::uniform({1, 2})});
  auto s = solve_lp(build_single_bidder_lp(two));
  ASSERT_EQ(s.status, LPStatus::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
  EXPECT_NEAR(opt_rev_single(two).revenue, 1.0, 1e-9);
  EXPECT_NEAR(opt_rev_single(ProductDist({DiscreteDist::uniform({1, 2, 3, 4})})).revenue, 1.5,
              1e-9);
  ProductDist sure({DiscreteDist::point_mass(2.5), DiscreteDist::point_mass(4)});
  EXPECT_NEAR(opt_rev_single(sure).revenue, 6.5, 1e-9);
}

TEST(RevenueLp, SingleItemIsBestPostedPrice) {
  RandomStream r(21, 0);
  for (int t = 0; t < 40; ++t) {
    auto d = random_dist(r, 6);
    double want = 0;
    for (std::size_t a = 0; a < d.size(); ++a)
      want = std::max(want, d.value(a) * (1 - d.cdf_below(a)));
    EXPECT_NEAR(opt_rev_single(ProductDist({d})).revenue, want, 1e-9);
  }
}

TEST(RevenueLp, LazyMatchesFullModel) {
  RandomStream r(22, 0);
  for (int t = 0; t < 25; ++t) {
    auto f = random_product(r, 2, 3);
    auto full = solve_lp(build_single_bidder_lp(f));
    ASSERT_EQ(full.status, LPStatus::kOptimal);
    auto lazy = opt_rev_single(f);
    EXPECT_NEAR(lazy.revenue, full.objective, 1e-9);
    EXPECT_TRUE(verify_bic(lazy.rf, f));
    EXPECT_TRUE(verify_bic(reduced_form_from_lp(TypeSpace(f), full.x), f));
  }
}

TEST(RevenueLp, PhaseOneOnFullModel) {
  // A slack revenue floor forces artificial columns into the start basis.
  RandomStream r(26, 0);
  for (int t = 0; t < 15; ++t) {
    auto f = random_product(r, 2, 3);
    const double opt = opt_rev_single(f).revenue;
    auto lp = build_single_bidder_lp(f);
    TypeSpace ts(f);
    LinearConstraint floor;
    for (std::size_t v = 0; v < ts.size(); ++v) floor.terms.emplace_back(lp_p_var(ts, v), ts.prob(v));
    floor.rel = Relation::kGe;
    floor.rhs = 0.5 * opt;
    lp.constraints.push_back(floor);
    auto s = solve_lp(lp);
    ASSERT_EQ(s.status, LPStatus::kOptimal);
    EXPECT_NEAR(s.objective, opt, 1e-9);
    EXPECT_LE(max_violation(lp, s.x), 1e-9);
    floor.rhs = 1.5 * opt + 1;
    lp.constraints.back() = floor;
    EXPECT_EQ(solve_lp(lp).status, LPStatus::kInfeasible);
  }
}

TEST(RevenueLp, DominatesMenusAndPostedPrices) {
  RandomStream r(23, 0);
  for (int t = 0; t < 25; ++t) {
    auto f = random_product(r, 2, 3);
    const double opt = opt_rev_single(f).revenue;
    EXPECT_GE(opt, menu_grid_oracle(f) - 1e-9);
    EXPECT_GE(opt, best_bundle_price_revenue(f) - 1e-9);
    EXPECT_GE(opt, best_item_prices_revenue(f) - 1e-9);
  }
  // Two iid uniform{1,2}: bundle at 3 earns 2.25, item prices earn 2.
  auto iid = ProductDist::iid(DiscreteDist::uniform({1, 2}), 2);
  EXPECT_NEAR(best_bundle_price_revenue(iid), 2.25, 1e-12);
  EXPECT_NEAR(best_item_prices_revenue(iid), 2.0, 1e-12);
  EXPECT_NEAR(menu_grid_oracle(iid), 2.25, 1e-12);
}

TEST(RevenueLp, DegenerateThreeItemInstances) {
  // These used to cycle under plain Dantzig pricing.
  RandomStream r(27, 0);
  for (int t = 0; t < 3; ++t) {
    auto f = random_product(r, 3, 3);
    auto opt = opt_rev_single(f);
    EXPECT_TRUE(verify_bic(opt.rf, f));
    EXPECT_NEAR(rf_revenue(opt.rf, TypeSpace(f)), opt.revenue, 1e-9);
    EXPECT_GE(opt.revenue, best_bundle_price_revenue(f) - 1e-9);
    EXPECT_GE(opt.revenue, best_item_prices_revenue(f) - 1e-9);
    EXPECT_LE(opt.revenue, single_bidder_bound(f, RegionMode::kQuantile).mean + 1e-8);
  }
}

TEST(RevenueLp, PermutationInvariantForIid) {
  RandomStream r(24, 0);
  for (int t = 0; t < 10; ++t) {
    auto d = random_dist(r, 3);
    auto e = random_dist(r, 2);
    const double ab = opt_rev_single(ProductDist({d, e})).revenue;
    const double ba = opt_rev_single(ProductDist({e, d})).revenue;
    EXPECT_NEAR(ab, ba, 1e-9);
  }
}

ReducedForm posted_price_rf(const TypeSpace& ts, const std::vector<double>& prices) {
  ReducedForm rf;
  for (std::size_t v = 0; v < ts.size(); ++v) {
    std::vector<double> pi(ts.m(), 0.0);
    double pay = 0;
    for (int j = 0; j < ts.m(); ++j)
      if (ts.value(v, j) >= prices[j]) {
        pi[j] = 1;
        pay += prices[j];
      }
    rf.pi.push_back(pi);
    rf.p.push_back(pay);
  }
  return rf;
}

TEST(VerifyBic, PostedPriceAndMutation) {
  auto f = ProductDist({DiscreteDist::uniform({1, 2, 3}), DiscreteDist::uniform({2, 5})});
  TypeSpace ts(f);
  auto rf = posted_price_rf(ts, {2, 5});
  EXPECT_TRUE(verify_bic(rf, f));
  auto opt = opt_rev_single(f).rf;
  EXPECT_TRUE(verify_bic(opt, f));
  for (std::size_t v = 0; v < ts.size(); ++v) {
    auto bad = opt;
    bad.p[v] += 0.1;
    EXPECT_FALSE(verify_bic(bad, f));
  }
  auto wrong = rf;
  wrong.pi[0][0] = 1.5;
  EXPECT_FALSE(verify_bic(wrong, f));
}

TEST(Lagrangian, BasicIdentities) {
  auto f = ProductDist({DiscreteDist::uniform({1, 2, 3}), DiscreteDist::uniform({2, 5})});
  TypeSpace ts(f);
  auto rf = opt_rev_single(f).rf;
  double welfare = 0;
  for (std::size_t v = 0; v < ts.size(); ++v)
    for (int j = 0; j < 2; ++j) welfare += ts.prob(v) * rf.pi[v][j] * ts.value(v, j);
  EXPECT_NEAR(lagrangian_value(all_to_sink_flow(ts), rf), welfare, 1e-9);
  ReducedForm zero{std::vector<std::vector<double>>(ts.size(), {0, 0}),
                   std::vector<double>(ts.size(), 0)};
  EXPECT_EQ(lagrangian_value(build_region_flow(f, RegionMode::kQuantile), zero), 0.0);
}

TEST(Lagrangian, WeakDualityOnRandomInstances) {
  RandomStream r(25, 0);
  for (int t = 0; t < 100; ++t) {
    const int m = 1 + static_cast<int>(r.below(2));
    auto f = random_product(r, m, 3);
    auto opt = opt_rev_single(f);
    for (RegionMode mode : {RegionMode::kValue, RegionMode::kQuantile}) {
      auto fn = build_region_flow(f, mode);
      const double l = lagrangian_value(fn, opt.rf);
      EXPECT_NEAR(l, virtual_welfare(fn, opt.rf), 1e-9);
      EXPECT_GE(l, opt.revenue - 1e-8);
    }
  }
}

}  // namespace
}  // namespace bklab
