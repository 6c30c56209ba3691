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

#include "bklab/stoch.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <variant>

#include "bklab/mech.h"
#include "bklab/montecarlo.h"

namespace bklab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 10-point Gauss-Legendre on [-1, 1].
constexpr double kGlX[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                            0.8650633666889845, 0.9739065285171717};
constexpr double kGlW[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                            0.1494513491505806, 0.0666713443086881};

template <class F>
double gauss_legendre(F&& g, double a, double b) {
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGlW[i] * (g(c - h * kGlX[i]) + g(c + h * kGlX[i]));
  return s * h;
}

template <class F>
double panels(F&& g, double a, double b, double width) {
  if (b <= a) return 0.0;
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += gauss_legendre(g, a + (b - a) * i / n, a + (b - a) * (i + 1) / n);
  return s;
}

constexpr double kTailS = 50.0;  // e^-50 is below double resolution of any weight
constexpr double kPanel = 0.25;

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::vector<SetSystem> constraints_for(const VcgSpec& spec, int m) {
  std::vector<SetSystem> c;
  c.reserve(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    if (spec.constraints.empty()) c.push_back(SetSystem::full(m));
    else c.push_back(spec.constraints[static_cast<std::size_t>(i) % spec.constraints.size()]);
  }
  return c;
}

void check_spec(const VcgSpec& spec, int m) {
  if (spec.n < 1) throw std::invalid_argument("VcgSpec: n must be >= 1");
  for (const auto& s : spec.constraints) {
    if (s.m() != m) throw std::invalid_argument("VcgSpec: constraint item count mismatch");
    if (spec.kind == VcgKind::kAdditive && s.kind() != SetSystem::Kind::kFull) {
      throw std::invalid_argument("VcgSpec: additive VCG needs Full constraints");
    }
  }
}

// Revenue of spec on the first spec.n rows of v.
double vcg_revenue(const ValueMatrix& v, const VcgSpec& spec,
                   const std::vector<SetSystem>& cons) {
  ValueMatrix rows(v.begin(), v.begin() + spec.n);
  switch (spec.kind) {
    case VcgKind::kAdditive: return vcg_additive(Profile::additive(std::move(rows))).revenue();
    case VcgKind::kConstrained:
      return vcg_constrained(Profile(std::move(rows), cons)).revenue();
    case VcgKind::kUnitDemand: return vcg_ud(Profile::additive(std::move(rows))).revenue();
  }
  return 0.0;
}

void draw_values(const ProductDist& f, RandomStream& rng, ValueMatrix& v) {
  for (auto& row : v) {
    for (int j = 0; j < f.m(); ++j) row[j] = sample_capped(f.items[j], rng);
  }
}

// Weight density of the r-th highest of ell uniforms, at u with 1-u = t.
double order_weight(int ell, int r, double u, double t) {
  const double c = std::exp(log_binom(ell, r - 1)) * (ell - r + 1);
  return c * std::pow(u, ell - r) * std::pow(t, r - 1);
}

struct Joint {
  std::map<std::pair<std::size_t, double>, double> a1_a2;  // (a_(1) index, a_(2)) -> prob
  double pr_e = 0.0;
};

// Exhaustive enumeration of a ~ F^l, b ~ F^k restricted to the event E.
// Under kUniformTie a tuple with tied maxima counts with the chance that a
// uniformly chosen maximizing draw belongs to a.
Joint enumerate_joint(const DiscreteDist& f, int l, int k, TopEvent ev = TopEvent::kStrict) {
  if (l < 1 || k < 1) throw std::invalid_argument("order statistics: need l, k >= 1");
  const std::size_t s = f.size();
  double total = 1.0;
  for (int i = 0; i < l + k; ++i) total *= static_cast<double>(s);
  if (total > 5e7) throw std::length_error("order statistics: enumeration too large");
  Joint j;
  std::vector<std::size_t> idx(static_cast<std::size_t>(l + k), 0);
  while (true) {
    std::size_t a1 = 0, a2 = 0, b1 = 0;
    int a_top = 0, b_top = 0;
    bool has_a2 = false;
    double p = 1.0;
    for (int i = 0; i < l; ++i) {
      const std::size_t x = idx[i];
      p *= f.prob(x);
      if (i == 0) a1 = x;
      else if (x >= a1) {
        a2 = a1;
        a1 = x;
        has_a2 = true;
      } else if (!has_a2 || x > a2) {
        a2 = x;
        has_a2 = true;
      }
    }
    for (int i = l; i < l + k; ++i) {
      p *= f.prob(idx[i]);
      b1 = std::max(b1, idx[i]);
    }
    double w = a1 > b1 ? 1.0 : 0.0;
    if (ev == TopEvent::kUniformTie && a1 == b1) {
      for (int i = 0; i < l; ++i) a_top += idx[i] == a1;
      for (int i = l; i < l + k; ++i) b_top += idx[i] == b1;
      w = static_cast<double>(a_top) / (a_top + b_top);
    }
    if (w > 0.0) {
      j.a1_a2[{a1, has_a2 ? f.value(a2) : 0.0}] += w * p;
      j.pr_e += w * p;
    }
    int pos = 0;
    while (pos < l + k && ++idx[pos] == s) idx[pos++] = 0;
    if (pos == l + k) break;
  }
  return j;
}

}  // namespace

const char* vcg_kind_name(VcgKind k) {
  switch (k) {
    case VcgKind::kAdditive: return "additive";
    case VcgKind::kConstrained: return "constrained";
    case VcgKind::kUnitDemand: return "ud";
  }
  return "?";
}

VcgKind parse_vcg_kind(const std::string& s) {
  if (s == "additive") return VcgKind::kAdditive;
  if (s == "constrained") return VcgKind::kConstrained;
  if (s == "ud") return VcgKind::kUnitDemand;
  throw std::invalid_argument("unknown mechanism '" + s + "' (additive|constrained|ud)");
}

Estimate estimate_vcg_revenue(const ProductDist& f, const VcgSpec& spec, const McOptions& mc) {
  check_spec(spec, f.m());
  const auto cons = constraints_for(spec, f.m());
  return monte_carlo_scalar(
      [&](RandomStream& rng) {
        ValueMatrix v(static_cast<std::size_t>(spec.n), std::vector<double>(f.m()));
        draw_values(f, rng, v);
        return vcg_revenue(v, spec, cons);
      },
      mc);
}

VcgComparison compare_vcg(const ProductDist& f, const VcgSpec& lhs, const VcgSpec& rhs,
                          double scale, const McOptions& mc) {
  check_spec(lhs, f.m());
  check_spec(rhs, f.m());
  const auto cl = constraints_for(lhs, f.m()), cr = constraints_for(rhs, f.m());
  const int n = std::max(lhs.n, rhs.n);
  auto est = monte_carlo(
      3,
      [&](RandomStream& rng, std::span<double> out) {
        ValueMatrix v(static_cast<std::size_t>(n), std::vector<double>(f.m()));
        draw_values(f, rng, v);
        out[0] = vcg_revenue(v, lhs, cl);
        out[1] = vcg_revenue(v, rhs, cr);
        out[2] = out[0] - scale * out[1];
      },
      mc);
  return {est[0], est[1], est[2]};
}

double Law::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * probs[i];
  return s;
}

double Law::tail_above(double x) const {
  double s = 0.0;
  for (std::size_t i = values.size(); i-- > 0 && values[i] > x;) s += probs[i];
  return s;
}

double Law::total() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

Law make_law(std::vector<std::pair<double, double>> atoms) {
  std::sort(atoms.begin(), atoms.end());
  Law law;
  for (const auto& [v, p] : atoms) {
    if (p < 0.0 || !std::isfinite(v)) throw std::invalid_argument("make_law: bad atom");
    if (p == 0.0) continue;
    if (!law.values.empty() && law.values.back() == v) law.probs.back() += p;
    else {
      law.values.push_back(v);
      law.probs.push_back(p);
    }
  }
  return law;
}

Law law_of(const DiscreteDist& d) { return Law{d.values(), d.probs()}; }

bool exact_fosd(const Law& x, const Law& y, double tol) {
  std::vector<double> pts = x.values;
  pts.insert(pts.end(), y.values.begin(), y.values.end());
  for (double t : pts) {
    if (x.tail_above(t) < y.tail_above(t) - tol) return false;
  }
  return true;
}

Law kth_highest_law(const DiscreteDist& d, int ell, int r) {
  if (ell < 1 || r < 1) throw std::invalid_argument("kth_highest_law: need ell, r >= 1");
  if (r > ell) return Law{{0.0}, {1.0}};
  // Pr[X_(r) <= v_t] = Pr[fewer than r draws exceed v_t].
  auto below = [&](std::size_t t) {
    const double fv = d.cdf_at(t), tail = d.tail_above(t);
    double s = 0.0;
    for (int i = 0; i < r; ++i) {
      s += std::exp(log_binom(ell, i)) * std::pow(tail, i) * std::pow(fv, ell - i);
    }
    return t + 1 == d.size() ? 1.0 : s;
  };
  Law law;
  double prev = 0.0;
  for (std::size_t t = 0; t < d.size(); ++t) {
    const double c = below(t);
    if (c - prev > 0.0) {
      law.values.push_back(d.value(t));
      law.probs.push_back(c - prev);
    }
    prev = c;
  }
  return law;
}

double quantile_integral(const Distribution& d, const std::function<double(double)>& w) {
  return std::visit(
      [&](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, DiscreteDist>) {
          double s = 0.0;
          for (std::size_t t = 0; t < rep.size(); ++t) {
            s += rep.value(t) * panels(w, rep.cdf_below(t), rep.cdf_at(t), kPanel);
          }
          return s;
        } else {
          // u = 1 - e^-s, so Q(u) du = Q e^-s ds; the tail is e^-s exactly.
          auto g = [&](double s) {
            const double t = std::exp(-s), u = -std::expm1(-s);
            double q;
            if constexpr (std::is_same_v<T, EqualRevenueCapped>) {
              q = std::min(rep.k, 1.0 / t);
            } else {
              q = rep.k - 1.0 + 1.0 / t;
            }
            return q * w(u) * t;
          };
          if constexpr (std::is_same_v<T, EqualRevenueCapped>) {
            const double cut = std::log(rep.k);
            return panels(g, 0.0, cut, kPanel) + panels(g, cut, cut + kTailS, kPanel);
          } else {
            return panels(g, 0.0, kTailS, kPanel);
          }
        }
      },
      d.rep());
}

double expected_kth_highest(const Distribution& d, int ell, int r) {
  if (ell < 1 || r < 1) throw std::invalid_argument("expected_kth_highest: need ell, r >= 1");
  if (r > ell) return 0.0;
  if (d.is_discrete()) return kth_highest_law(d.discrete(), ell, r).mean();
  if (!d.bounded() && r == 1) return kInf;
  return quantile_integral(d, [&](double u) { return order_weight(ell, r, u, 1.0 - u); });
}

double exact_vcg_additive_revenue(const ProductDist& f, int n) {
  double s = 0.0;
  for (const auto& d : f.items) s += expected_kth_highest(d, n, 2);
  return s;
}

OrderPairLaws order_pair_laws(const DiscreteDist& f, int l, int k, TopEvent ev) {
  const Joint j = enumerate_joint(f, l, k, ev);
  OrderPairLaws out;
  out.pr_e = j.pr_e;
  if (j.pr_e > 0.0) {
    std::vector<std::pair<double, double>> atoms;
    for (const auto& [key, p] : j.a1_a2) atoms.emplace_back(key.second, p / j.pr_e);
    out.second_given_e = make_law(std::move(atoms));
  }
  out.fresh_second = kth_highest_law(f, l + k, 2);
  return out;
}

bool check_pos_corr(const DiscreteDist& f, int l, int k) {
  const Joint j = enumerate_joint(f, l, k);
  if (j.pr_e == 0.0) return true;
  std::vector<double> xs;
  for (std::size_t t = 0; t < f.size(); ++t) xs.push_back(f.virtual_value_at(t));
  for (double x : xs) {
    double hit = 0.0;
    for (const auto& [key, p] : j.a1_a2)
      if (f.virtual_value_at(key.first) > x) hit += p;
    const double base = hit / j.pr_e;
    for (double y : f.values()) {
      double cond = 0.0, both = 0.0;
      for (const auto& [key, p] : j.a1_a2) {
        if (key.second <= y) continue;
        cond += p;
        if (f.virtual_value_at(key.first) > x) both += p;
      }
      if (cond > 0.0 && both / cond < base - 1e-12) return false;
    }
  }
  return true;
}

bool check_dominance(const DiscreteDist& f, int l, int k, TopEvent ev) {
  const auto laws = order_pair_laws(f, l, k, ev);
  if (laws.pr_e == 0.0) return true;
  return exact_fosd(laws.fresh_second, laws.second_given_e);
}

MaxFreshReport check_claim_max_fresh(const DiscreteDist& f, int l, int k) {
  const Joint j = enumerate_joint(f, l, k);
  if (j.pr_e == 0.0) {
    throw std::domain_error("check_claim_max_fresh: Pr[a_(1) > b_(1)] = 0");
  }
  const Law c2 = kth_highest_law(f, l + k, 2);
  MaxFreshReport r;
  for (const auto& [key, p] : j.a1_a2) {
    const double phi = f.virtual_value_at(key.first), q = p / j.pr_e;
    r.lhs += q * std::max(phi, key.second);
    double fresh = 0.0;
    for (std::size_t i = 0; i < c2.values.size(); ++i) fresh += c2.probs[i] * std::max(phi, c2.values[i]);
    r.rhs += q * fresh;
  }
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

PriceSweep bundle_pricing_revenue(const Distribution& item, int m, std::span<const double> grid,
                                  const McOptions& mc) {
  if (m < 1) throw std::invalid_argument("bundle_pricing_revenue: m must be >= 1");
  if (grid.empty()) throw std::invalid_argument("bundle_pricing_revenue: empty price grid");
  PriceSweep sweep;
  sweep.prices.assign(grid.begin(), grid.end());
  sweep.revenue = monte_carlo(
      static_cast<int>(grid.size()),
      [&](RandomStream& rng, std::span<double> out) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += sample_capped(item, rng);
        for (std::size_t p = 0; p < grid.size(); ++p) out[p] = sum >= grid[p] ? grid[p] : 0.0;
      },
      mc);
  for (std::size_t p = 1; p < grid.size(); ++p) {
    if (sweep.revenue[p].mean > sweep.revenue[sweep.best].mean) sweep.best = p;
  }
  return sweep;
}

CcResult cc_search(const ProductDist& f, const VcgSpec& base, const Estimate& benchmark,
                   int c_max, const McOptions& mc) {
  if (c_max < 0) throw std::invalid_argument("cc_search: c_max must be >= 0");
  CcResult res;
  const double target = benchmark.mean + kGuardSigmas * benchmark.stderr_;
  for (int c = 0; c <= c_max; ++c) {
    VcgSpec spec = base;
    spec.n = base.n + c;
    CcStep step;
    step.c = c;
    step.revenue = estimate_vcg_revenue(f, spec, mc);
    step.pass = step.revenue.mean - kGuardSigmas * step.revenue.stderr_ >= target;
    res.steps.push_back(step);
    if (step.pass) {
      res.c = c;
      break;
    }
  }
  return res;
}

}  // namespace bklab
