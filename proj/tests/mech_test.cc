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

#include "bklab/mech.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "bklab/random.h"

namespace bklab {
namespace {

// ---- independent oracles -------------------------------------------------

struct BruteVcg {
  std::vector<int> assignment;
  double welfare;
  std::vector<double> payments;
};

// Enumerates every assignment vector in lexicographic order (unallocated
// first) and scores bidders with value_of directly.
double brute_best(const Profile& p, int skip, std::vector<int>* best_assign, bool unit) {
  const int n = p.n(), m = p.m();
  std::vector<int> a(m, -1);
  double best = -1;
  std::function<void(int)> go = [&](int j) {
    if (j == m) {
      double w = 0;
      for (int i = 0; i < n; ++i) {
        ItemSet s = 0;
        for (int k = 0; k < m; ++k)
          if (a[k] == i) s |= 1u << k;
        if (s == 0) continue;
        if (i == skip) return;
        if (unit && set_size(s) > 1) return;
        if (!unit && !p.constraints[i].is_feasible(s)) return;
        w += p.constraints[i].value_of(p.values[i], s);
      }
      if (w > best + 1e-9) {
        best = w;
        if (best_assign) *best_assign = a;
      }
      return;
    }
    for (int i = -1; i < n; ++i) {
      a[j] = i;
      go(j + 1);
    }
  };
  go(0);
  return best;
}

BruteVcg brute_vcg(const Profile& p, bool unit = false) {
  BruteVcg r;
  r.welfare = brute_best(p, -2, &r.assignment, unit);
  r.payments.assign(p.n(), 0);
  for (int i = 0; i < p.n(); ++i) {
    ItemSet s = 0;
    for (int k = 0; k < p.m(); ++k)
      if (r.assignment[k] == i) s |= 1u << k;
    if (!s) continue;
    r.payments[i] = brute_best(p, i, nullptr, unit) - (r.welfare - p.constraints[i].value_of(p.values[i], s));
  }
  return r;
}

ValueMatrix random_values(RandomStream& r, int n, int m, double scale = 10) {
  ValueMatrix v(n, std::vector<double>(m));
  for (auto& row : v)
    for (auto& x : row) x = r.uniform01() * scale;
  return v;
}

SetSystem random_constraint(RandomStream& r, int m) {
  switch (r.below(4)) {
    case 0:
      return SetSystem::full(m);
    case 1:
      return SetSystem::uniform(m, 1 + static_cast<int>(r.below(m)));
    case 2: {
      if (m < 2) return SetSystem::full(m);
      return SetSystem::partition(m, {1u, all_items(m) & ~1u}, {1, 1});
    }
    default: {
      std::vector<ItemSet> f;
      for (ItemSet s = 0; s <= all_items(m); ++s)
        if (set_size(s) <= 1 || (s & 1u) == 0) f.push_back(s);
      return SetSystem::explicit_family(m, f);
    }
  }
}

// ---- single-item mechanisms ---------------------------------------------

TEST(SpaLazy, Examples) {
  std::vector<double> b = {5, 3};
  auto o = spa_lazy(b, std::vector<double>{0, 0});
  EXPECT_EQ(o.assignment[0], 0);
  EXPECT_EQ(o.payments[0], 3);
  o = spa_lazy(b, std::vector<double>{6, 0});
  EXPECT_EQ(o.assignment[0], kUnallocated);
  EXPECT_EQ(o.revenue(), 0);
  o = spa_lazy(b, std::vector<double>{4, 0});
  EXPECT_EQ(o.payments[0], 4);
  o = spa_lazy(std::vector<double>{2, 2}, std::vector<double>{0, 0});
  EXPECT_EQ(o.assignment[0], 0);
  EXPECT_EQ(o.payments[0], 2);
}

TEST(MechanismM, Examples) {
  Distribution d = DiscreteDist({1, 4, 6}, {0.5, 0.25, 0.25});
  ASSERT_EQ(monopoly_reserve(d), 4);
  auto o = mechanism_m(std::vector<double>{6, 1}, 0, d);
  EXPECT_EQ(o.payments[0], 4);
  o = mechanism_m(std::vector<double>{1, 4}, 0, d);
  EXPECT_EQ(o.assignment[0], 1);
  EXPECT_EQ(o.payments[1], 1);
  o = mechanism_m(std::vector<double>{1, 1}, 0, d);
  EXPECT_EQ(o.assignment[0], kUnallocated);
}

TEST(MyersonSingle, Examples) {
  Distribution d = DiscreteDist::uniform({1, 2, 3, 4});
  EXPECT_EQ(myerson_single(std::vector<double>{1, 1}, d).assignment[0], kUnallocated);
  auto o = myerson_single(std::vector<double>{3, 4}, d);
  EXPECT_EQ(o.assignment[0], 1);
  EXPECT_EQ(o.payments[1], 3);
  o = myerson_single(std::vector<double>{4}, d);
  EXPECT_EQ(o.payments[0], 2);
}

// ---- VCG -----------------------------------------------------------------

TEST(VcgAdditive, Examples) {
  auto o = vcg_additive(Profile::additive({{3, 1}, {2, 5}}));
  EXPECT_EQ(o.assignment, (std::vector<int>{0, 1}));
  EXPECT_EQ(o.payments, (std::vector<double>{2, 1}));
  EXPECT_EQ(o.revenue(), 3);
  o = vcg_additive(Profile::additive({{3, 1, 4}}));
  EXPECT_EQ(o.assignment, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(o.revenue(), 0);
  EXPECT_THROW(vcg_additive(Profile::uniform_constraint({{1, 2}}, SetSystem::uniform(2, 1))),
               std::invalid_argument);
}

TEST(VcgConstrained, UnitDemandExample) {
  auto p = Profile::uniform_constraint({{3, 1}, {2, 5}}, SetSystem::uniform(2, 1));
  auto o = vcg_constrained(p);
  EXPECT_EQ(o.assignment, (std::vector<int>{0, 1}));
  EXPECT_EQ(o.welfare, 8);
  EXPECT_EQ(o.payments, (std::vector<double>{0, 0}));
  auto u = vcg_ud(Profile::additive({{3, 1}, {2, 5}}));
  EXPECT_EQ(u.assignment, o.assignment);
  EXPECT_EQ(u.payments, o.payments);
}

TEST(VcgConstrained, SingleBidderPaysNothing) {
  auto o = vcg_constrained(Profile::uniform_constraint({{3, 1, 2}}, SetSystem::uniform(3, 2)));
  EXPECT_EQ(o.revenue(), 0);
  EXPECT_EQ(o.welfare, 5);
}

TEST(VcgConstrained, FullEqualsAdditive) {
  RandomStream r(10, 0);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(r.below(4)), m = 1 + static_cast<int>(r.below(4));
    auto p = Profile::additive(random_values(r, n, m));
    auto a = vcg_additive(p), c = vcg_constrained(p);
    EXPECT_EQ(a.assignment, c.assignment);
    EXPECT_NEAR(a.welfare, c.welfare, 1e-9);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(a.payments[i], c.payments[i], 1e-9);
  }
}

TEST(VcgConstrained, MatchesBruteForceOracle) {
  RandomStream r(11, 0);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(r.below(4)), m = 1 + static_cast<int>(r.below(4));
    std::vector<SetSystem> cs;
    for (int i = 0; i < n; ++i) cs.push_back(random_constraint(r, m));
    Profile p(random_values(r, n, m), cs);
    auto o = vcg_constrained(p);
    auto b = brute_vcg(p);
    EXPECT_EQ(o.assignment, b.assignment);
    EXPECT_NEAR(o.welfare, b.welfare, 1e-9);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(o.payments[i], std::max(0.0, b.payments[i]), 1e-9);
      // Feasible allocation, individually rational.
      const ItemSet s = o.bundle(i);
      EXPECT_TRUE(p.constraints[i].is_feasible(s));
      EXPECT_LE(o.payments[i], p.constraints[i].value_of(p.values[i], s) + 1e-9);
      EXPECT_GE(o.payments[i], 0);
    }
  }
}

TEST(VcgConstrained, LexicographicTieBreak) {
  // Both bidders value the single item equally; bidder 0 wins.
  auto o = vcg_constrained(Profile::additive({{4}, {4}}));
  EXPECT_EQ(o.assignment[0], 0);
  EXPECT_EQ(o.payments[0], 4);
  // Zero values stay unallocated.
  o = vcg_constrained(Profile::additive({{0, 2}}));
  EXPECT_EQ(o.assignment, (std::vector<int>{kUnallocated, 0}));
}

TEST(VcgConstrained, SizeLimit) {
  ValueMatrix v(12, std::vector<double>(7, 1.0));
  EXPECT_THROW(vcg_constrained(Profile::additive(v)), std::length_error);
}

TEST(VcgUd, MatchesBruteForceAndHungarian) {
  RandomStream r(12, 0);
  for (int t = 0; t < 300; ++t) {
    const int n = 1 + static_cast<int>(r.below(4)), m = 1 + static_cast<int>(r.below(4));
    auto p = Profile::additive(random_values(r, n, m));
    auto o = vcg_ud(p);
    auto b = brute_vcg(Profile::uniform_constraint(p.values, SetSystem::uniform(m, 1)));
    EXPECT_EQ(o.assignment, b.assignment);
    EXPECT_NEAR(o.welfare, b.welfare, 1e-9);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(o.payments[i], std::max(0.0, b.payments[i]), 1e-9);
    std::vector<bool> act(n, true);
    EXPECT_NEAR(max_weight_matching(p, act).welfare, b.welfare, 1e-9);
    act[0] = false;
    EXPECT_NEAR(max_weight_matching(p, act).welfare, max_welfare(p, act, true).welfare, 1e-9);
  }
}

TEST(VcgUd, LargeInstanceUsesMatching) {
  RandomStream r(13, 0);
  auto p = Profile::additive(random_values(r, 30, 6));
  auto o = vcg_ud(p);
  std::vector<bool> act(30, true);
  EXPECT_NEAR(o.welfare, max_weight_matching(p, act).welfare, 1e-9);
  for (int i = 0; i < 30; ++i) EXPECT_LE(set_size(o.bundle(i)), 1);
}

TEST(VcgUd, SingleBidderTakesBestItem) {
  auto o = vcg_ud(Profile::additive({{1, 7, 3}}));
  EXPECT_EQ(o.assignment, (std::vector<int>{kUnallocated, 0, kUnallocated}));
  EXPECT_EQ(o.revenue(), 0);
}

TEST(VcgUd, AllEqualSquareRevenueInvariant) {
  // Every perfect matching is optimal.  With no idle bidder nobody imposes
  // an externality; a third bidder makes each winner pay 2.
  auto o = vcg_ud(Profile::additive({{2, 2}, {2, 2}}));
  EXPECT_EQ(o.welfare, 4);
  EXPECT_EQ(o.revenue(), 0);
  auto o3 = vcg_ud(Profile::additive({{2, 2}, {2, 2}, {2, 2}}));
  EXPECT_EQ(o3.welfare, 4);
  EXPECT_EQ(o3.revenue(), 4);
}

// ---- critical payments and SP-j ------------------------------------------

TEST(CriticalPayment, Examples) {
  AllocationRule second = [](std::span<const double> b) {
    return b[0] >= b[1] ? 0 : 1;
  };
  EXPECT_NEAR(critical_payment(second, std::vector<double>{5, 3}, 0), 3, 1e-9);
  AllocationRule lazy = [](std::span<const double> b) {
    return spa_lazy(b, std::vector<double>{4, 0}).assignment[0];
  };
  EXPECT_NEAR(critical_payment(lazy, std::vector<double>{5, 3}, 0), 4, 1e-9);
  BidSpace atoms{{1, 2, 3, 4, 5}, 1};
  EXPECT_EQ(critical_payment(second, std::vector<double>{5, 3}, 0, atoms), 3);
  AllocationRule bad = [](std::span<const double> b) { return (b[0] > 2 && b[0] < 4) ? 0 : 1; };
  EXPECT_THROW(critical_payment(bad, std::vector<double>{3, 0}, 0, atoms), std::domain_error);
  EXPECT_THROW(critical_payment(second, std::vector<double>{1, 3}, 0), std::invalid_argument);
}

TEST(SpJ, ExternalBidderWins) {
  Distribution d = EqualRevenueCapped{10};
  // n=1, m=2: u=(3), stand-in=(5), fresh=(2,4).
  std::vector<double> b = {3, 5, 2, 4};
  for (int j : {0, 1}) {
    auto o = sp_j(b, j, d, 1, 2);
    EXPECT_EQ(o.assignment[0], 1);
    EXPECT_NEAR(o.payments[1], 3, 1e-9);
  }
}

TEST(SpJ, OwnGroupWinsAtCriticalAtom) {
  Distribution d = DiscreteDist::uniform({1, 2, 3, 4});
  std::vector<double> b = {4, 2, 3, 1};
  for (int j : {0, 1}) {
    auto o = sp_j(b, j, d, 1, 2);
    EXPECT_EQ(o.assignment[0], 0);
    // At 2 the own bidder ties or loses the virtual comparison phi(2)=0 < 1.
    EXPECT_EQ(o.payments[0], 3);
  }
}

TEST(SpJ, AlwaysSellsAndRejectsBadInput) {
  Distribution d = DiscreteDist::uniform({1, 2, 3});
  std::vector<double> b(6, 2.0);
  auto o = sp_j(b, 0, d, 2, 2);
  EXPECT_NE(o.assignment[0], kUnallocated);
  EXPECT_THROW(sp_j(std::vector<double>(5, 2.0), 0, d, 2, 2), std::invalid_argument);
}

TEST(SpJ, TruthfulOnSmallDiscreteInstances) {
  RandomStream r(21, 0);
  for (int trial = 0; trial < 30; ++trial) {
    Distribution d = DiscreteDist::uniform({1, 2, 3, 5});
    const int n = 1 + static_cast<int>(r.below(2)), m = 1 + static_cast<int>(r.below(2));
    const int j = static_cast<int>(r.below(m));
    const int total = 2 * n + 2 * m - 2;
    std::vector<double> vals(total);
    for (auto& x : vals) x = d.discrete().value(r.below(4));
    for (int i = 0; i < total; ++i) {
      auto truthful = sp_j(vals, j, d, n, m);
      const double u_true = (truthful.assignment[0] == i ? vals[i] : 0) - truthful.payments[i];
      for (double lie : d.discrete().values()) {
        auto b = vals;
        b[i] = lie;
        auto o = sp_j(b, j, d, n, m);
        const double u_lie = (o.assignment[0] == i ? vals[i] : 0) - o.payments[i];
        EXPECT_LE(u_lie, u_true + 1e-12);
      }
    }
  }
}

// Exhaustive over every deterministic always-sell rule on a tiny grid.
double discrete_rule_revenue(const DiscreteDist& d, int n, const std::vector<int>& rule) {
  const int s = static_cast<int>(d.size());
  auto index = [&](const std::vector<int>& prof) {
    int idx = 0;
    for (int i = n - 1; i >= 0; --i) idx = idx * s + prof[i];
    return idx;
  };
  double rev = 0;
  std::vector<int> prof(n, 0);
  const int total = static_cast<int>(std::pow(s, n));
  for (int idx = 0; idx < total; ++idx) {
    int x = idx;
    double pr = 1;
    for (int i = 0; i < n; ++i) {
      prof[i] = x % s;
      x /= s;
      pr *= d.prob(prof[i]);
    }
    const int w = rule[idx];
    auto q = prof;
    int crit = prof[w];
    for (int a = 0; a <= prof[w]; ++a) {
      q[w] = a;
      if (rule[index(q)] == w) {
        crit = a;
        break;
      }
    }
    rev += pr * d.value(crit);
  }
  return rev;
}

bool monotone(const DiscreteDist& d, int n, const std::vector<int>& rule) {
  const int s = static_cast<int>(d.size());
  const int total = static_cast<int>(std::pow(s, n));
  int stride = 1;
  for (int i = 0; i < n; ++i, stride *= s) {
    for (int idx = 0; idx < total; ++idx) {
      const int digit = (idx / stride) % s;
      if (digit + 1 < s && rule[idx] == i && rule[idx + stride] != i) return false;
    }
  }
  return true;
}

TEST(AlwaysSell, SecondPriceIsOptimalAmongDeterministicRules) {
  const std::vector<std::pair<DiscreteDist, int>> cases = {
      {DiscreteDist({1, 3}, {0.6, 0.4}), 2},
      {DiscreteDist({1, 2, 4}, {0.5, 0.3, 0.2}), 2},
      {DiscreteDist({2, 3}, {0.3, 0.7}), 3}};
  for (const auto& [d, n] : cases) {
    ASSERT_TRUE(is_regular(Distribution(d)));
    const int s = static_cast<int>(d.size());
    const int total = static_cast<int>(std::pow(s, n));
    std::vector<int> rule(total, 0);
    // Second price: highest value, lowest id.
    std::vector<int> spa(total);
    for (int idx = 0; idx < total; ++idx) {
      int x = idx, best = 0, bv = -1;
      for (int i = 0; i < n; ++i, x /= s)
        if (x % s > bv) bv = x % s, best = i;
      spa[idx] = best;
    }
    const double spa_rev = discrete_rule_revenue(d, n, spa);
    double best = 0;
    const long combos = static_cast<long>(std::pow(n, total));
    for (long c = 0; c < combos; ++c) {
      long x = c;
      for (int idx = 0; idx < total; ++idx, x /= n) rule[idx] = static_cast<int>(x % n);
      if (!monotone(d, n, rule)) continue;
      best = std::max(best, discrete_rule_revenue(d, n, rule));
    }
    EXPECT_NEAR(best, spa_rev, 1e-12);
  }
}

// ---- certificates ---------------------------------------------------------

TEST(VcgCert, Examples) {
  auto p = Profile::additive({{3, 4}});
  EXPECT_EQ(vcg_lower_bound_cert(p, vcg_additive(p)), 0);
  auto u = Profile::uniform_constraint({{5}, {3}, {2}}, SetSystem::uniform(1, 1));
  auto o = vcg_constrained(u);
  EXPECT_EQ(vcg_lower_bound_cert(u, o), 3);
  EXPECT_EQ(o.revenue(), 3);
}

TEST(VcgCert, NeverExceedsRevenue) {
  RandomStream r(31, 0);
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + static_cast<int>(r.below(5)), m = 1 + static_cast<int>(r.below(4));
    auto p = Profile::uniform_constraint(random_values(r, n, m), random_constraint(r, m));
    auto o = vcg_constrained(p);
    EXPECT_LE(vcg_lower_bound_cert(p, o), o.revenue() + 1e-9);
  }
}

TEST(VcgCert, SingleAllocatedOutsideOptimumWithoutJ) {
  // If item j goes to a bidder not allocated in the optimum without item j,
  // every other such bidder receives nothing.
  RandomStream r(32, 0);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + static_cast<int>(r.below(3)), m = 2 + static_cast<int>(r.below(2));
    auto p = Profile::uniform_constraint(random_values(r, n, m), random_constraint(r, m));
    auto opt = max_welfare(p, std::vector<bool>(n, true));
    for (int j = 0; j < m; ++j) {
      auto pj = p;
      for (int i = 0; i < n; ++i) pj.values[i][j] = 0;
      auto minus = max_welfare(pj, std::vector<bool>(n, true));
      std::vector<bool> in_minus(n, false);
      for (int k = 0; k < m; ++k)
        if (minus.assignment[k] >= 0) in_minus[minus.assignment[k]] = true;
      const int win = opt.assignment[j];
      if (win < 0 || in_minus[win]) continue;
      for (int k = 0; k < m; ++k) {
        const int b = opt.assignment[k];
        if (k != j && b >= 0 && b != win) EXPECT_TRUE(in_minus[b]);
      }
    }
  }
}

TEST(RChain, Examples) {
  ValueMatrix v = {{4, 1}, {3, 9}};
  std::vector<int> s = {0, 1};
  auto c = r_chain(s, v);
  EXPECT_EQ(c.j_star, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.r, (std::vector<double>{4, 9}));
  ValueMatrix eq = {{2, 2}, {2, 2}, {2, 2}};
  std::vector<int> s3 = {2, 0, 1};
  c = r_chain(s3, eq);
  EXPECT_EQ(c.j_star, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.remaining.back(), (std::vector<int>{2}));
  std::vector<int> one = {0};
  EXPECT_THROW(r_chain(one, v), std::invalid_argument);
}

TEST(RChain, NestedSetsKeepNesting) {
  RandomStream r(41, 0);
  for (int t = 0; t < 300; ++t) {
    const int n = 6, m = 1 + static_cast<int>(r.below(3));
    auto v = random_values(r, n, m);
    std::vector<int> T, S;
    for (int i = 0; i < n; ++i)
      if (r.below(4)) T.push_back(i);
    for (int i : T)
      if (r.below(2)) S.push_back(i);
    if (static_cast<int>(S.size()) < m + 1) continue;
    auto cs = r_chain(S, v), ct = r_chain(T, v);
    for (int j = 0; j < m; ++j) {
      for (int i : cs.remaining[j])
        EXPECT_NE(std::find(ct.remaining[j].begin(), ct.remaining[j].end(), i),
                  ct.remaining[j].end());
      EXPECT_LE(cs.r[j], ct.r[j] + 1e-12);
    }
  }
}

TEST(AsymCert, Examples) {
  auto p = Profile::additive({{9, 0}, {0, 9}, {5, 1}, {1, 4}});
  auto o = vcg_additive(p);
  EXPECT_EQ(o.unallocated_bidders(), (std::vector<int>{2, 3}));
  EXPECT_EQ(vcg_asym_lower_bound_cert(p, o), 5 + 4);
  auto single = Profile::additive({{7}, {5}, {3}});
  auto os = vcg_additive(single);
  EXPECT_EQ(vcg_asym_lower_bound_cert(single, os), 5);
  EXPECT_THROW(vcg_asym_lower_bound_cert(Profile::additive({{1, 1}, {1, 1}, {1, 1}}), o),
               std::invalid_argument);
}

TEST(AsymCert, NeverExceedsRevenue) {
  RandomStream r(42, 0);
  for (int t = 0; t < 300; ++t) {
    const int m = 1 + static_cast<int>(r.below(2));
    const int n = 2 * m + static_cast<int>(r.below(2));
    std::vector<SetSystem> cs;
    for (int i = 0; i < n; ++i) cs.push_back(random_constraint(r, m));
    Profile p(random_values(r, n, m), cs);
    auto o = vcg_constrained(p);
    EXPECT_LE(vcg_asym_lower_bound_cert(p, o), o.revenue() + 1e-9);
  }
}

}  // namespace
}  // namespace bklab
