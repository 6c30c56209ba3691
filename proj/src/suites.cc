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
#include "bklab/suites.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "bklab/duality.h"
#include "bklab/mech.h"
#include "bklab/optrev.h"
#include "bklab/setsys.h"
#include "bklab/stoch.h"
#include "bklab/typespace.h"

namespace bklab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

// Suite parameters with defaults; --seed and --samples win over the file.
class Params {
 public:
  Params(const Json& j, const SuiteOverrides& o) : j_(j.is_object() ? j : Json::object()), o_(o) {}

  int i(const char* key, int def) const { return j_.value(key, def); }
  double d(const char* key, double def) const { return j_.value(key, def); }
  std::vector<int> ints(const char* key, std::vector<int> def) const {
    return j_.contains(key) ? j_.at(key).get<std::vector<int>>() : def;
  }
  std::uint64_t seed(std::uint64_t def = 1) const {
    return o_.seed ? *o_.seed : j_.value("seed", def);
  }
  McOptions mc(std::uint64_t def_samples) const {
    McOptions mc;
    mc.samples = o_.samples ? *o_.samples : j_.value("samples", def_samples);
    mc.seed = seed();
    mc.workers = o_.workers;
    return mc;
  }

 private:
  Json j_;
  SuiteOverrides o_;
};

// Worst margin of a family of "lhs >= rhs" comparisons.
class Sweep {
 public:
  void add(double margin, const std::string& where) {
    ++count_;
    if (margin < -tol_) ++violations_;
    if (margin < worst_) {
      worst_ = margin;
      where_ = where;
    }
  }
  explicit Sweep(double tol) : tol_(tol) {}
  Check check(const std::string& name) const {
    Check c;
    c.name = name;
    c.value = worst_;
    c.verdict = violations_ == 0 && count_ > 0 ? Verdict::kPass : Verdict::kFail;
    c.detail = strf("min margin over %d cases, %d below -%g", count_, violations_, tol_);
    if (!where_.empty()) c.detail += ", worst at " + where_;
    return c;
  }

 private:
  double tol_;
  int count_ = 0, violations_ = 0;
  double worst_ = kInf;
  std::string where_;
};

Check exact_check(const std::string& name, double value, bool ok, const std::string& detail) {
  return Check{name, value, 0.0, 0, ok ? Verdict::kPass : Verdict::kFail, detail};
}

Check info(const std::string& name, double value, const std::string& detail) {
  return Check{name, value, 0.0, 0, Verdict::kInfo, detail};
}

// Guard-banded "lhs >= rhs": fails only when the difference is more than
// kGuardSigmas standard errors below zero.
Check mc_geq(const std::string& name, const VcgComparison& cmp) {
  Check c;
  c.name = name;
  c.value = cmp.diff.mean;
  c.stderr_ = cmp.diff.stderr_;
  c.samples = cmp.diff.samples;
  c.verdict = cmp.diff.mean + kGuardSigmas * cmp.diff.stderr_ >= 0.0 ? Verdict::kPass
                                                                       : Verdict::kFail;
  const double z = cmp.diff.stderr_ > 0 ? cmp.diff.mean / cmp.diff.stderr_ : kInf;
  c.detail = strf("lhs=%.6g (se %.3g) rhs=%.6g (se %.3g) z=%.2f", cmp.lhs.mean, cmp.lhs.stderr_,
                  cmp.rhs.mean, cmp.rhs.stderr_, z);
  return c;
}

std::string law_str(const DiscreteDist& d) {
  std::string s = "{";
  for (std::size_t t = 0; t < d.size(); ++t) {
    s += strf("%s%g:%.4f", t ? " " : "", d.value(t), d.prob(t));
  }
  return s + "}";
}

std::string product_str(const ProductDist& f) {
  std::string s;
  for (int j = 0; j < f.m(); ++j) s += (j ? " x " : "") + law_str(f.items[j].discrete());
  return s;
}

double opt_revenue(const ProductDist& f) { return opt_rev_single(f).revenue; }

// Non-matroid system on m >= 3 items: singletons plus {0, 1}.
SetSystem non_matroid(int m) {
  std::vector<ItemSet> sets = {0, 0b11};
  for (int j = 0; j < m; ++j) sets.push_back(ItemSet{1} << j);
  return SetSystem::explicit_family(m, sets);
}

// ---------------------------------------------------------------- suites

SuiteReport classic_bk(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 20), lo = p.i("min_support", 2), hi = p.i("max_support", 6);
  const double tol = p.d("tol", 1e-9);
  RandomStream r(rep.seed, 0);
  std::vector<DiscreteDist> fam;
  for (int t = 0; t < count; ++t) fam.push_back(random_regular_dist(r, lo, hi));
  double spa_paths = 0.0, opt_paths = 0.0;
  for (int n : p.ints("n", {1, 2, 3})) {
    Sweep sw(tol), vs_opt(tol);
    for (int t = 0; t < count; ++t) {
      const auto& d = fam[t];
      const double spa = second_price_revenue(d, n + 1);
      spa_paths = std::max(spa_paths, std::abs(spa - expected_kth_highest(Distribution(d), n + 1, 2)));
      const double opt = optimal_single_item_revenue(d, n);
      const double alt = multi_bidder_bound(ProductDist({d}), n, RegionMode::kQuantile).mean;
      opt_paths = std::max(opt_paths, std::abs(alt - opt));
      const std::string where = strf("instance %d %s", t, law_str(d).c_str());
      sw.add(spa - myerson_mechanism_revenue(d, n), where);
      vs_opt.add(spa - opt, where);
    }
    rep.checks.push_back(sw.check(strf("spa-%d-ge-myerson-%d", n + 1, n)));
    Check c = vs_opt.check(strf("spa-%d-ge-discrete-optimum-%d", n + 1, n));
    c.verdict = Verdict::kInfo;
    rep.checks.push_back(c);
  }
  rep.checks.push_back(exact_check("spa-two-paths", spa_paths, spa_paths <= tol,
                                   "profile enumeration vs order-statistic law"));
  rep.checks.push_back(exact_check("discrete-optimum-two-paths", opt_paths, opt_paths <= tol,
                                   "virtual surplus of the max vs the m=1 duality bound"));
  return rep;
}

SuiteReport warmup_iid(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 20), lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  const int max_m = p.i("max_m", 3);
  const double tol = p.d("tol", 1e-8);
  Sweep sw(tol), vs_opt(tol);
  RandomStream r(rep.seed, 0);
  for (int t = 0; t < count; ++t) {
    const int m = 1 + t % max_m;
    const auto d = random_regular_dist(r, lo, hi);
    const double opt = opt_revenue(ProductDist::iid(d, m));
    const std::string where = strf("instance %d m=%d %s", t, m, law_str(d).c_str());
    sw.add(m * myerson_mechanism_revenue(d, m) - opt, where);
    vs_opt.add(m * optimal_single_item_revenue(d, m) - opt, where);
  }
  rep.checks.push_back(sw.check("sum-myerson-m-ge-opt"));
  Check c = vs_opt.check("sum-discrete-optimum-m-ge-opt");
  c.verdict = Verdict::kInfo;
  rep.checks.push_back(c);
  return rep;
}

SuiteReport new_bound_single(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 50), lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  const int min_m = p.i("min_m", 2), max_m = p.i("max_m", 3);
  const double tol = p.d("tol", 1e-8);
  Sweep bound_vs_opt(tol), spa_vs_bound(tol), spa_vs_opt(tol), value_vs_opt(tol);
  RandomStream r(rep.seed, 0);
  for (int t = 0; t < count; ++t) {
    const int m = min_m + t % (max_m - min_m + 1);
    ProductDist f = random_regular_product(r, m, lo, hi);
    const double opt = opt_revenue(f);
    const double qb = single_bidder_bound(f, RegionMode::kQuantile).mean;
    const double vb = single_bidder_bound(f, RegionMode::kValue).mean;
    double spa = 0.0;
    for (int j = 0; j < m; ++j) spa += expected_kth_highest(f.items[j], m + 1, 2);
    const std::string where = strf("instance %d ", t) + product_str(f);
    bound_vs_opt.add(qb - opt, where);
    spa_vs_bound.add(spa - qb, where);
    spa_vs_opt.add(spa - opt, where);
    value_vs_opt.add(vb - opt, where);
  }
  rep.checks.push_back(bound_vs_opt.check("quantile-bound-ge-opt"));
  rep.checks.push_back(spa_vs_bound.check("spa-m-plus-1-ge-quantile-bound"));
  Check c = spa_vs_opt.check("spa-m-plus-1-ge-opt");
  c.verdict = Verdict::kInfo;
  rep.checks.push_back(c);
  c = value_vs_opt.check("value-bound-ge-opt");
  c.verdict = Verdict::kInfo;
  rep.checks.push_back(c);
  return rep;
}

// Value-mode bound for (F_a, F_b): item b always wins the value comparison,
// so it is phi_b + E[v_a].
double bench0(const Distribution& a, const Distribution& b) {
  return b.virtual_value(b.support_min() + 1.0) + expected_kth_highest(a, 1, 1);
}

SuiteReport counterexample(const Params& p, SuiteReport rep) {
  const double k = p.d("k", 100.0);
  const Distribution a(EqualRevenueCapped{k}), b(ShiftedEqualRevenue{k});
  const double lnk = std::log(k);

  const double ea = quantile_integral(a, [](double) { return 1.0; });
  rep.checks.push_back(exact_check("mean-item-a-vs-2-plus-ln-k", ea,
                                   std::abs(ea - (2 + lnk)) <= 1e-6 * (2 + lnk),
                                   strf("2 + ln k = %.6f", 2 + lnk)));
  rep.checks.push_back(exact_check("mean-item-a-vs-1-plus-ln-k", ea,
                                   std::abs(ea - (1 + lnk)) <= 1e-9 * (1 + lnk),
                                   strf("1 + ln k = %.6f", 1 + lnk)));

  const double b2 = expected_kth_highest(b, 2, 2);
  rep.checks.push_back(exact_check("vcg2-item-b-exact", b2, std::abs(b2 - (k + 1)) <= 1e-9 * k,
                                   strf("k + 1 = %g", k + 1)));
  const McOptions mc = p.mc(1000000);
  const Estimate e2 = estimate_vcg_revenue(ProductDist({b}), VcgSpec{2, VcgKind::kAdditive, {}}, mc);
  rep.checks.push_back(Check{"vcg2-item-b-mc", e2.mean, e2.stderr_, e2.samples,
                             std::abs(e2.mean - (k + 1)) <= kGuardSigmas * e2.stderr_
                                 ? Verdict::kPass
                                 : Verdict::kFail,
                             strf("|mc - (k+1)| = %.3g", std::abs(e2.mean - (k + 1)))});

  // Per-bidder share of the two-bidder revenue is the area under the
  // revenue curve q * Q(1 - q).
  const double area = quantile_integral(b, [](double u) { return 1.0 - u; });
  rep.checks.push_back(exact_check("per-bidder-item-b-payment", area,
                                   std::abs(area - (k + 1) / 2) <= 1e-9 * k,
                                   strf("(k + 1)/2 = %g", (k + 1) / 2)));

  double worst = kInf;
  std::string lines;
  for (int l = p.i("min_ell", 2); l <= p.i("max_ell", 6); ++l) {
    const double v = expected_kth_highest(a, l, 2) + expected_kth_highest(b, l, 2);
    worst = std::min(worst, (k + 2 * l - 1) - v);
    lines += strf(" l=%d:%.4f", l, v);
  }
  rep.checks.push_back(exact_check("vcg-ell-le-k-plus-2ell-minus-1", worst, worst >= -1e-9 * k,
                                   "min slack;" + lines));

  const double b0 = bench0(a, b);
  rep.checks.push_back(exact_check("bench0-ge-k-plus-ln-k", b0, b0 >= k + lnk - 1e-9 * k,
                                   strf("k + ln k = %.6f; phi_b = %.6g pointwise", k + lnk,
                                        b.virtual_value(k + 1))));
  McOptions bmc = mc;
  bmc.samples = static_cast<std::uint64_t>(p.d("bound_samples", 200000));
  const Estimate bm = single_bidder_bound(ProductDist({a, b}), RegionMode::kValue, bmc);
  rep.checks.push_back(
      Check{"bench0-mc-agrees", bm.mean, bm.stderr_, bm.samples,
            std::abs(bm.mean - b0) <= kGuardSigmas * bm.stderr_ ? Verdict::kPass : Verdict::kFail,
            strf("exact %.6f", b0)});
  rep.checks.push_back(info("phi-b-footnote", k, "value of E[phi_b] from revenue = virtual welfare"));

  const double big = std::exp(p.d("big_log_k", 20.0));
  const Distribution ba(EqualRevenueCapped{big}), bb(ShiftedEqualRevenue{big});
  const ProductDist fb({ba, bb});
  const double bench_big = bench0(ba, bb);
  const int c_max = p.i("c_max", 5);
  double cap = 0.0;
  for (int l = 1; l <= 1 + c_max; ++l) {
    cap = std::max(cap, expected_kth_highest(ba, l, 2) + expected_kth_highest(bb, l, 2));
  }
  rep.checks.push_back(exact_check("big-k-vcg-below-bench0", bench_big - cap, cap < bench_big,
                                   strf("bench0 - max_l VCG(l), l <= %d", 1 + c_max)));
  McOptions cmc = mc;
  cmc.samples = static_cast<std::uint64_t>(p.d("cc_samples", 100000));
  const CcResult cc = cc_search(fb, VcgSpec{1, VcgKind::kAdditive, {}}, Estimate::exact(bench_big),
                                c_max, cmc);
  const auto& last = cc.steps.back();
  rep.checks.push_back(Check{"big-k-cc-search-none", last.revenue.mean, last.revenue.stderr_,
                             last.revenue.samples, cc.c ? Verdict::kFail : Verdict::kPass,
                             cc.c ? strf("found c = %d", *cc.c)
                                  : strf("none up to c = %d; benchmark %.6g", c_max, bench_big)});
  return rep;
}

SuiteReport additive_main(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 20), n = p.i("n", 1), m = p.i("m", 2);
  const int lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  const double tol = p.d("tol", 1e-8);
  const int extra = n + 2 * m - 2;
  Sweep sw(tol);
  int worst_c = 0;
  std::map<int, int> hist;
  RandomStream r(rep.seed, 0);
  for (int t = 0; t < count; ++t) {
    ProductDist f = random_regular_product(r, m, lo, hi);
    const double opt = opt_revenue(f);
    sw.add(exact_vcg_additive_revenue(f, n + extra) - opt,
           strf("instance %d ", t) + product_str(f));
    int c = 0;
    while (c < extra && exact_vcg_additive_revenue(f, n + c) < opt - tol) ++c;
    ++hist[c];
    worst_c = std::max(worst_c, c);
  }
  rep.checks.push_back(sw.check(strf("vcg-%d-ge-opt-%d", n + extra, n)));
  std::string h;
  for (auto [c, cnt] : hist) h += strf(" c=%d:%d", c, cnt);
  rep.checks.push_back(info("realized-c-max", worst_c, strf("claimed bound %d;", extra) + h));
  return rep;
}

SuiteReport revj(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 20), m = p.i("m", 2);
  const int lo = p.i("min_support", 2), hi = p.i("max_support", 3);
  const double tol = p.d("tol", 1e-9);
  RandomStream r(rep.seed, 0);
  for (int n : p.ints("n", {1, 2})) {
    Sweep upper(tol), spj(tol), vcg(tol);
    for (int t = 0; t < count; ++t) {
      ProductDist f = random_regular_product(r, m, lo, hi);
      const auto terms = multi_bidder_bound_terms(f, n, RegionMode::kQuantile);
      for (int j = 0; j < m; ++j) {
        const double bound = rev_j_bound(f, n, j).mean;
        const double sp = sp_j_expected_revenue(f, j, n);
        const std::string where = strf("instance %d j=%d ", t, j) + product_str(f);
        upper.add(bound - terms.items[j].mean, where);
        spj.add(sp - bound, where);
        vcg.add(expected_kth_highest(f.items[j], 2 * n + 2 * m - 2, 2) - sp, where);
      }
    }
    rep.checks.push_back(upper.check(strf("rev-j-le-bound-n%d", n)));
    rep.checks.push_back(spj.check(strf("spj-ge-bound-n%d", n)));
    // Second-price payments fall below thresholds when bids tie on an atom.
    Check c = vcg.check(strf("vcg-ge-spj-n%d", n));
    c.verdict = Verdict::kInfo;
    rep.checks.push_back(c);
  }
  return rep;
}

SuiteReport spj_claims(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 50), lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  const auto ls = p.ints("l", {1, 2, 3}), ks = p.ints("k", {1, 2, 3});
  Sweep claim(1e-12), corr(1e-12);
  int cases = 0, pos_bad = 0, dom_bad = 0, tie_bad = 0;
  std::string dom_where;
  RandomStream r(rep.seed, 0);
  for (int t = 0; t < count; ++t) {
    const auto d = random_regular_dist(r, lo, hi);
    for (int l : ls)
      for (int k : ks) {
        ++cases;
        const std::string where = strf("instance %d l=%d k=%d %s", t, l, k, law_str(d).c_str());
        const auto mf = check_claim_max_fresh(d, l, k);
        claim.add(mf.rhs - mf.lhs, where);
        const bool pc = check_pos_corr(d, l, k), dom = check_dominance(d, l, k);
        pos_bad += !pc;
        if (!dom) {
          if (dom_bad++ == 0) dom_where = where;
        }
        tie_bad += !check_dominance(d, l, k, TopEvent::kUniformTie);
        if (pc && dom) corr.add(mf.rhs - mf.lhs, where);
      }
  }
  rep.checks.push_back(claim.check("claim-max-fresh"));
  rep.checks.push_back(corr.check("corr-under-hypotheses"));
  rep.checks.push_back(exact_check("pos-corr", pos_bad, pos_bad == 0,
                                   strf("%d of %d cases fail", pos_bad, cases)));
  rep.checks.push_back(exact_check(
      "dominance", dom_bad, dom_bad == 0,
      strf("%d of %d cases fail", dom_bad, cases) + (dom_bad ? ", first at " + dom_where : "")));
  rep.checks.push_back(info("dominance-uniform-tie", tie_bad,
                            strf("%d of %d cases fail when tied maxima are split uniformly",
                                 tie_bad, cases)));
  return rep;
}

struct Case {
  int n, m;
};

// "cases": [[n, m], ...]
std::vector<Case> cases_of(const Json& raw, std::vector<Case> def) {
  if (!raw.is_object() || !raw.contains("cases")) return def;
  std::vector<Case> out;
  for (const auto& c : raw.at("cases")) out.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  return out;
}

ProductDist pinned_product(std::uint64_t seed, int m, int lo, int hi) {
  RandomStream r(seed, 1000 + static_cast<std::uint64_t>(m));
  return random_regular_product(r, m, lo, hi);
}

SuiteReport downward(const Params& p, const Json& raw, SuiteReport rep) {
  const McOptions mc = p.mc(100000);
  const int lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  for (auto [n, m] : cases_of(raw, {{2, 2}, {2, 3}, {3, 2}})) {
    const ProductDist f = pinned_product(rep.seed, m, lo, hi);
    std::vector<std::pair<std::string, SetSystem>> cons = {
        {"uniform1", SetSystem::uniform(m, 1)}, {"uniform2", SetSystem::uniform(m, std::min(2, m))}};
    if (m >= 3) cons.emplace_back("explicit-nonmatroid", non_matroid(m));
    for (const auto& [label, s] : cons) {
      const auto cmp = compare_vcg(f, VcgSpec{n + m - 1, VcgKind::kConstrained, {s}},
                                   VcgSpec{n, VcgKind::kAdditive, {}}, 1.0, mc);
      rep.checks.push_back(mc_geq(strf("n%d-m%d-%s", n, m, label.c_str()), cmp));
    }
  }
  return rep;
}

SuiteReport matroid(const Params& p, const Json& raw, SuiteReport rep) {
  const McOptions mc = p.mc(100000);
  const int lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  for (auto [n, m] : cases_of(raw, {{2, 2}, {2, 3}})) {
    const ProductDist f = pinned_product(rep.seed, m, lo, hi);
    const int half = (m + 1) / 2;
    std::vector<ItemSet> blocks = {all_items(half)};
    if (m > half) blocks.push_back(all_items(m) & ~all_items(half));
    std::vector<std::pair<std::string, SetSystem>> cons = {
        {"uniform1", SetSystem::uniform(m, 1)},
        {"partition", SetSystem::partition(m, blocks, std::vector<int>(blocks.size(), 1))}};
    for (const auto& [label, s] : cons) {
      const int rho = disjoint_spanning_number(s);
      const auto cmp = compare_vcg(f, VcgSpec{n + rho, VcgKind::kConstrained, {s}},
                                   VcgSpec{n, VcgKind::kAdditive, {}}, 1.0, mc);
      Check c = mc_geq(strf("n%d-m%d-%s-rho%d", n, m, label.c_str(), rho), cmp);
      rep.checks.push_back(c);
    }
  }
  int bad = 0, bad_full = 0;
  const int max_m = p.i("rho_max_m", 8);
  for (int m = 1; m <= max_m; ++m) {
    bad += disjoint_spanning_number(SetSystem::uniform(m, 1)) != m - 1;
    bad_full += disjoint_spanning_number(SetSystem::full(m)) != 0;
  }
  rep.checks.push_back(exact_check("rho-uniform1-is-m-minus-1", bad, bad == 0,
                                   strf("mismatches for m = 1..%d", max_m)));
  rep.checks.push_back(exact_check("rho-full-is-0", bad_full, bad_full == 0,
                                   strf("mismatches for m = 1..%d", max_m)));
  return rep;
}

ValueMatrix random_values(RandomStream& r, int n, int m) {
  ValueMatrix v(n, std::vector<double>(m));
  for (auto& row : v)
    for (auto& x : row) x = static_cast<double>(r.below(10));
  return v;
}

SetSystem random_constraint(RandomStream& r, int m) {
  switch (r.below(4)) {
    case 0: return SetSystem::full(m);
    case 1: return SetSystem::uniform(m, 1);
    case 2: return SetSystem::uniform(m, 1 + static_cast<int>(r.below(m)));
    default: {
      std::vector<ItemSet> blocks(2, 0);
      for (int j = 0; j < m; ++j) blocks[r.below(2)] |= ItemSet{1} << j;
      std::vector<ItemSet> nonempty;
      for (auto b : blocks)
        if (b) nonempty.push_back(b);
      return SetSystem::partition(m, nonempty, std::vector<int>(nonempty.size(), 1));
    }
  }
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

SuiteReport asymmetric(const Params& p, SuiteReport rep) {
  const int pairs = p.i("pairs", 300), instances = p.i("instances", 300);
  RandomStream r(rep.seed, 0);
  int prop_bad = 0, mon_bad = 0, made = 0;
  while (made < pairs) {
    const int n = 8, m = 1 + static_cast<int>(r.below(3));
    const auto v = random_values(r, n, m);
    std::vector<int> t_set, s_set;
    for (int i = 0; i < n; ++i)
      if (r.below(4)) t_set.push_back(i);
    for (int i : t_set)
      if (r.below(3)) s_set.push_back(i);
    if (static_cast<int>(s_set.size()) < m) continue;
    ++made;
    const auto cs = r_chain(s_set, v), ct = r_chain(t_set, v);
    for (int j = 0; j < m; ++j) {
      const auto& above_s = j == 0 ? s_set : cs.remaining[j - 1];
      const auto& above_t = j == 0 ? t_set : ct.remaining[j - 1];
      prop_bad += !subset_of(above_s, above_t);
      mon_bad += cs.r[j] > ct.r[j];
    }
  }
  rep.checks.push_back(exact_check("payment-prop", prop_bad, prop_bad == 0,
                                   strf("S_{>j-1} within T_{>j-1} on %d nested pairs", pairs)));
  rep.checks.push_back(exact_check("payment-mon", mon_bad, mon_bad == 0,
                                   strf("r_j(S) <= r_j(T) on %d nested pairs", pairs)));

  Sweep cert(1e-9);
  for (int t = 0; t < instances; ++t) {
    const int m = 1 + static_cast<int>(r.below(3));
    const int n = 2 * m + static_cast<int>(r.below(2));
    std::vector<SetSystem> cons;
    for (int i = 0; i < n; ++i) cons.push_back(random_constraint(r, m));
    Profile prof(random_values(r, n, m), cons);
    const Outcome o = vcg_constrained(prof);
    cert.add(o.revenue() - vcg_asym_lower_bound_cert(prof, o), strf("instance %d", t));
  }
  rep.checks.push_back(cert.check("asym-cert-le-vcg-revenue"));

  const McOptions mc = p.mc(100000);
  const int n = p.i("n", 2), m = p.i("m", 2);
  const ProductDist f = pinned_product(rep.seed, m, p.i("min_support", 2), p.i("max_support", 4));
  const auto cmp =
      compare_vcg(f, VcgSpec{n + 2 * m - 2, VcgKind::kConstrained,
                             {SetSystem::uniform(m, 1), SetSystem::full(m)}},
                  VcgSpec{n, VcgKind::kAdditive, {}}, 1.0, mc);
  rep.checks.push_back(mc_geq(strf("n%d-m%d-mixed-uniform1-full", n, m), cmp));
  return rep;
}

SuiteReport vcg_ud(const Params& p, const Json& raw, SuiteReport rep) {
  const McOptions mc = p.mc(100000);
  const int lo = p.i("min_support", 2), hi = p.i("max_support", 4);
  for (auto [n, m] : cases_of(raw, {{2, 2}, {2, 3}})) {
    const ProductDist f = pinned_product(rep.seed, m, lo, hi);
    const auto cmp = compare_vcg(f, VcgSpec{n + m - 1, VcgKind::kUnitDemand, {}},
                                 VcgSpec{n, VcgKind::kAdditive, {}}, 1.0, mc);
    rep.checks.push_back(mc_geq(strf("n%d-m%d", n, m), cmp));
  }
  return rep;
}

SuiteReport duality_core(const Params& p, SuiteReport rep) {
  const int count = p.i("instances", 100), max_m = p.i("max_m", 3);
  const int lo = p.i("min_support", 1), hi = p.i("max_support", 3);
  int flows = 0, not_conserving = 0;
  double closed_err = 0.0;
  Sweep wd_value(1e-8), wd_quantile(1e-8);
  RandomStream r(rep.seed, 0);
  for (int t = 0; t < count; ++t) {
    const int m = 1 + t % max_m;
    ProductDist f = random_regular_product(r, m, lo, hi);
    const TypeSpace ts(f);
    const auto opt = opt_rev_single(f);
    for (RegionMode mode : {RegionMode::kValue, RegionMode::kQuantile}) {
      const auto regions = region_assignment(ts, mode);
      const FlowNetwork fn = build_region_flow(ts, regions);
      ++flows;
      not_conserving += !check_flow_conservation(fn, 1e-10);
      const auto phi = virtual_transform(fn);
      for (std::size_t v = 0; v < ts.size(); ++v)
        for (int j = 0; j < m; ++j) {
          const double want = regions[v] == j ? ts.item(j).virtual_value_at(ts.digit(v, j))
                                              : ts.value(v, j);
          closed_err = std::max(closed_err, std::abs(phi[v][j] - want));
        }
      const double vw = virtual_welfare(fn, opt.rf);
      (mode == RegionMode::kValue ? wd_value : wd_quantile)
          .add(vw - opt.revenue, strf("instance %d ", t) + product_str(f));
    }
  }
  rep.checks.push_back(exact_check("flow-conservation", not_conserving, not_conserving == 0,
                                   strf("%d of %d region flows fail at 1e-10", not_conserving,
                                        flows)));
  rep.checks.push_back(exact_check("virtual-closed-form", closed_err, closed_err <= 1e-10,
                                   "max |Phi_j(v) - closed form| over all types"));
  rep.checks.push_back(wd_value.check("weak-duality-value"));
  rep.checks.push_back(wd_quantile.check("weak-duality-quantile"));
  return rep;
}

SuiteReport lower_bound(const Params& p, SuiteReport rep) {
  const int m = p.i("m", 64);
  const double k = p.d("k", 1e6);
  const Distribution item(EqualRevenueCapped{k});
  const double mlnm = m * std::log(static_cast<double>(m));
  const double target = mlnm / 4;
  const int points = p.i("grid_points", 16);
  const double g_lo = p.d("grid_lo", 0.25), g_hi = p.d("grid_hi", 2.0);
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(mlnm * (g_lo + (g_hi - g_lo) * i / (points - 1)));
  const auto sweep = bundle_pricing_revenue(item, m, grid, p.mc(100000));
  const Estimate& best = sweep.revenue[sweep.best];
  rep.checks.push_back(Check{"bundle-revenue-ge-m-ln-m-over-4", best.mean, best.stderr_,
                             best.samples,
                             best.mean + kGuardSigmas * best.stderr_ >= target ? Verdict::kPass
                                                                              : Verdict::kFail,
                             strf("target %.4f (natural log), best price %.2f", target,
                                  sweep.prices[sweep.best])});
  const double target2 = m * std::log2(static_cast<double>(m)) / 4;
  rep.checks.push_back(Check{"bundle-revenue-vs-base-2-target", best.mean, best.stderr_,
                             best.samples, Verdict::kInfo,
                             strf("m log2 m / 4 = %.4f, %s", target2,
                                  best.mean + kGuardSigmas * best.stderr_ >= target2 ? "holds"
                                                                                    : "fails")});
  // VCG with l bidders earns at most m * l on equal-revenue items.
  double slack = kInf;
  for (int l = 1; l <= p.i("cap_max_ell", 8); ++l) {
    slack = std::min(slack, m * l - m * expected_kth_highest(item, l, 2));
  }
  rep.checks.push_back(exact_check("vcg-le-m-times-ell", slack, slack >= -1e-9 * m,
                                   "min over l of m l - VCG(l)"));
  const double c_floor = std::log(static_cast<double>(m)) / 4 - 1;
  const int c_min = static_cast<int>(std::ceil(target / m - 1 - 1e-12));
  rep.checks.push_back(exact_check("c-must-exceed-ln-m-over-4-minus-1", c_min,
                                   c_min >= c_floor && m * (1.0 + c_min - 1) < target,
                                   strf("ln(m)/4 - 1 = %.4f; smallest c with m(1+c) >= target",
                                        c_floor)));
  return rep;
}

SuiteReport large_market(const Params& p, SuiteReport rep) {
  const int m = p.i("m", 2), n = p.i("n", 20);
  const ProductDist f = pinned_product(rep.seed, m, p.i("min_support", 2), p.i("max_support", 4));
  const double scale = static_cast<double>(n - m) / (2 * n - 1);
  const auto cmp = compare_vcg(f, VcgSpec{n, VcgKind::kAdditive, {}},
                               VcgSpec{2 * n + m - 1, VcgKind::kAdditive, {}}, scale, p.mc(100000));
  rep.checks.push_back(mc_geq(strf("vcg-%d-ge-scaled-vcg-%d", n, 2 * n + m - 1), cmp));
  const double exact = exact_vcg_additive_revenue(f, n) -
                       scale * exact_vcg_additive_revenue(f, 2 * n + m - 1);
  rep.checks.push_back(exact_check("exact-margin", exact, exact >= -1e-12,
                                   strf("scale (n-m)/(2n-1) = %.6f", scale)));
  return rep;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kInfo: return "INFO";
  }
  return "?";
}

bool SuiteReport::passed() const {
  for (const auto& c : checks)
    if (c.verdict == Verdict::kFail) return false;
  return true;
}

const Check* SuiteReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "classic-bk", "warmup-iid", "new-bound-single", "additive-main", "revj",
      "spj-claims", "downward",   "matroid",          "asymmetric",    "vcg-ud",
      "counterexample", "lower-bound", "large-market", "duality-core"};
  return names;
}

SuiteReport run_suite(const std::string& name, const Json& params, const SuiteOverrides& over) {
  const Params p(params, over);
  SuiteReport rep;
  rep.suite = name;
  rep.seed = p.seed();
  const auto start = std::chrono::steady_clock::now();
  if (name == "classic-bk") rep = classic_bk(p, rep);
  else if (name == "warmup-iid") rep = warmup_iid(p, rep);
  else if (name == "new-bound-single") rep = new_bound_single(p, rep);
  else if (name == "additive-main") rep = additive_main(p, rep);
  else if (name == "revj") rep = revj(p, rep);
  else if (name == "spj-claims") rep = spj_claims(p, rep);
  else if (name == "downward") rep = downward(p, params, rep);
  else if (name == "matroid") rep = matroid(p, params, rep);
  else if (name == "asymmetric") rep = asymmetric(p, rep);
  else if (name == "vcg-ud") rep = vcg_ud(p, params, rep);
  else if (name == "counterexample") rep = counterexample(p, rep);
  else if (name == "lower-bound") rep = lower_bound(p, rep);
  else if (name == "large-market") rep = large_market(p, rep);
  else if (name == "duality-core") rep = duality_core(p, rep);
  else throw std::invalid_argument("unknown suite '" + name + "'");
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<CsvRow> to_csv_rows(const SuiteReport& r) {
  std::vector<CsvRow> rows;
  for (const auto& c : r.checks) {
    rows.push_back({r.suite, c.name, c.value, c.stderr_, c.samples, r.seed, verdict_name(c.verdict)});
  }
  return rows;
}

std::string format_check(const SuiteReport& r, const Check& c) {
  std::string s = strf("%s %s/%s value=%.10g", verdict_name(c.verdict), r.suite.c_str(),
                       c.name.c_str(), c.value);
  if (c.samples) s += strf(" stderr=%.4g samples=%llu", c.stderr_,
                           static_cast<unsigned long long>(c.samples));
  if (!c.detail.empty()) s += " (" + c.detail + ")";
  return s;
}

DiscreteDist random_regular_dist(RandomStream& r, int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("random_regular_dist: bad support range");
  while (true) {
    const int s = lo + static_cast<int>(r.below(static_cast<std::uint64_t>(hi - lo + 1)));
    std::vector<double> v, pr;
    double acc = 0, tot = 0;
    for (int t = 0; t < s; ++t) {
      acc += 1 + static_cast<double>(r.below(5));
      v.push_back(acc);
      pr.push_back(0.05 + r.uniform01());
      tot += pr.back();
    }
    for (auto& x : pr) x /= tot;
    DiscreteDist d(v, pr);
    if (is_regular(Distribution(d))) return d;
  }
}

ProductDist random_regular_product(RandomStream& r, int m, int lo, int hi) {
  std::vector<Distribution> items;
  for (int j = 0; j < m; ++j) items.emplace_back(random_regular_dist(r, lo, hi));
  return ProductDist(std::move(items));
}

double optimal_single_item_revenue(const DiscreteDist& d, int n) {
  if (n < 1) throw std::invalid_argument("optimal_single_item_revenue: n must be >= 1");
  if (!is_regular(Distribution(d))) {
    throw std::domain_error("optimal_single_item_revenue: irregular law");
  }
  const Law top = kth_highest_law(d, n, 1);
  double rev = 0.0;
  for (std::size_t i = 0; i < top.values.size(); ++i) {
    rev += top.probs[i] * std::max(0.0, d.virtual_value_at(*d.index_of(top.values[i])));
  }
  return rev;
}

namespace {

double enumerate_single_item(const DiscreteDist& d, int n,
                             const std::function<double(std::span<const double>)>& revenue) {
  if (n < 1) throw std::invalid_argument("single-item enumeration: n must be >= 1");
  if (std::pow(static_cast<double>(d.size()), n) > 1e7) {
    throw std::length_error("single-item enumeration: too many profiles");
  }
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> bids(n);
  double rev = 0.0;
  while (true) {
    double pr = 1.0;
    for (int i = 0; i < n; ++i) {
      bids[i] = d.value(idx[i]);
      pr *= d.prob(idx[i]);
    }
    rev += pr * revenue(bids);
    int pos = 0;
    while (pos < n && ++idx[pos] == d.size()) idx[pos++] = 0;
    if (pos == n) break;
  }
  return rev;
}

}  // namespace

double myerson_mechanism_revenue(const DiscreteDist& d, int n) {
  const Distribution dist(d);
  return enumerate_single_item(
      d, n, [&](std::span<const double> b) { return myerson_single(b, dist).revenue(); });
}

double second_price_revenue(const DiscreteDist& d, int n) {
  const std::vector<double> zero(static_cast<std::size_t>(n), 0.0);
  return enumerate_single_item(
      d, n, [&](std::span<const double> b) { return spa_lazy(b, zero).revenue(); });
}

double sp_j_expected_revenue(const ProductDist& f, int j, int n) {
  const int m = f.m();
  if (j < 0 || j >= m) throw std::invalid_argument("sp_j_expected_revenue: bad item");
  const Distribution& dj = f.items[j];
  const DiscreteDist& d = dj.discrete();
  const int count = 2 * n + 2 * m - 2;
  if (std::pow(static_cast<double>(d.size()), count) > 1e7) {
    throw std::length_error("sp_j_expected_revenue: too many bid profiles");
  }
  std::vector<std::size_t> idx(count, 0);
  std::vector<double> bids(count);
  double rev = 0.0;
  while (true) {
    double pr = 1.0;
    for (int i = 0; i < count; ++i) {
      bids[i] = d.value(idx[i]);
      pr *= d.prob(idx[i]);
    }
    rev += pr * sp_j(bids, j, dj, n, m).revenue();
    int pos = 0;
    while (pos < count && ++idx[pos] == d.size()) idx[pos++] = 0;
    if (pos == count) break;
  }
  return rev;
}

}  // namespace bklab
