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

#include "bklab/duality.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "bklab/montecarlo.h"

namespace bklab {
namespace {

constexpr double kTieTol = 1e-12;

int argmax_keys(std::span<const double> keys, double tol) {
  int best = 0;
  for (int j = 1; j < static_cast<int>(keys.size()); ++j) {
    if (keys[j] > keys[best] + tol) best = j;
  }
  return best;
}

// Region index of type idx using atom CDF values.
int region_of_type(const TypeSpace& ts, std::size_t idx, RegionMode mode,
                   std::vector<double>& scratch) {
  const int m = ts.m();
  scratch.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const std::size_t t = ts.digit(idx, j);
    scratch[j] = mode == RegionMode::kValue ? ts.item(j).value(t) : ts.item(j).cdf_at(t);
  }
  return argmax_keys(scratch, mode == RegionMode::kValue ? 0.0 : kTieTol);
}

// Exact E[max of n iid draws] from a finite law given as (value, prob) pairs.
double expected_max_iid(std::vector<std::pair<double, double>> law, int n) {
  std::sort(law.begin(), law.end());
  double below = 0.0, e = 0.0;
  for (std::size_t a = 0; a < law.size();) {
    std::size_t b = a;
    double mass = 0.0;
    while (b < law.size() && law[b].first == law[a].first) mass += law[b++].second;
    const double above = std::min(1.0, below + mass);
    e += law[a].first * (std::pow(above, n) - std::pow(below, n));
    below = above;
    a = b;
  }
  return e;
}

double g_term(int region, int j, double phi, double v) {
  return region == j ? std::max(0.0, phi) : v;
}

Estimate sum_estimates(const std::vector<Estimate>& items) {
  Estimate t;
  t.method = items.front().method;
  t.samples = items.front().samples;
  double var = 0.0;
  for (const auto& e : items) {
    t.mean += e.mean;
    var += e.stderr_ * e.stderr_;
  }
  // Conservative for correlated terms: the caller gets the exact total
  // standard error from the joint estimator when it matters.
  t.stderr_ = std::sqrt(var);
  return t;
}

// Monte Carlo path: outputs are the m item terms followed by their sum.
BoundReport mc_bound(const ProductDist& f, int n, RegionMode mode, const McOptions& mc) {
  const int m = f.m();
  auto est = monte_carlo(
      m + 1,
      [&](RandomStream& rng, std::span<double> out) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < m; ++j) v[j] = sample_capped(f.items[j], rng);
          const int r = region_of(v, f, mode);
          for (int j = 0; j < m; ++j) {
            const double g = g_term(r, j, r == j ? f.items[j].virtual_value(v[j]) : 0.0, v[j]);
            out[j] = i == 0 ? g : std::max(out[j], g);
          }
        }
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += out[j];
        out[m] = s;
      },
      mc);
  BoundReport rep;
  rep.items.assign(est.begin(), est.begin() + m);
  rep.total = est[m];
  return rep;
}

}  // namespace

const char* region_mode_name(RegionMode mode) {
  return mode == RegionMode::kValue ? "value" : "quantile";
}

int region_of(std::span<const double> v, const ProductDist& f, RegionMode mode) {
  if (v.size() != static_cast<std::size_t>(f.m())) {
    throw std::invalid_argument("region_of: type length must equal m");
  }
  if (mode == RegionMode::kValue) return argmax_keys(v, 0.0);
  std::vector<double> q(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) q[j] = f.items[j].cdf(v[j]);
  return argmax_keys(q, kTieTol);
}

std::vector<int> region_assignment(const TypeSpace& ts, RegionMode mode) {
  std::vector<int> out(ts.size());
  std::vector<double> scratch;
  for (std::size_t idx = 0; idx < ts.size(); ++idx) {
    out[idx] = region_of_type(ts, idx, mode, scratch);
  }
  return out;
}

FlowNetwork build_region_flow(const TypeSpace& ts, std::span<const int> regions) {
  if (regions.size() != ts.size()) {
    throw std::invalid_argument("build_region_flow: one region per type");
  }
  const int m = ts.m();
  for (std::size_t idx = 0; idx < ts.size(); ++idx) {
    const int r = regions[idx];
    if (r < -1 || r >= m) throw std::invalid_argument("build_region_flow: region out of range");
    if (r < 0) continue;
    if (ts.digit(idx, r) + 1 < ts.item(r).size() && regions[idx + ts.stride(r)] != r) {
      throw std::invalid_argument("build_region_flow: region is not upward-closed");
    }
  }
  FlowNetwork fn{ts, {}};
  std::vector<double> inflow(ts.size(), 0.0);
  for (std::size_t idx = ts.size(); idx-- > 0;) {
    const double out = ts.prob(idx) + inflow[idx];
    const int r = regions[idx];
    if (r >= 0 && ts.digit(idx, r) > 0 && regions[idx - ts.stride(r)] == r) {
      const std::size_t to = idx - ts.stride(r);
      fn.edges.push_back({idx, to, out});
      inflow[to] += out;
    } else {
      fn.edges.push_back({idx, kSink, out});
    }
  }
  return fn;
}

FlowNetwork build_region_flow(const ProductDist& f, RegionMode mode) {
  TypeSpace ts(f);
  const std::vector<int> regions = region_assignment(ts, mode);
  return build_region_flow(ts, regions);
}

FlowNetwork all_to_sink_flow(const TypeSpace& ts) {
  FlowNetwork fn{ts, {}};
  for (std::size_t idx = 0; idx < ts.size(); ++idx) fn.edges.push_back({idx, kSink, ts.prob(idx)});
  return fn;
}

bool check_flow_conservation(const FlowNetwork& fn, double tol) {
  const std::size_t n = fn.types.size();
  std::vector<double> in(n, 0.0), out(n, 0.0);
  for (const auto& e : fn.edges) {
    if (e.weight < -tol || e.from >= n || (e.to != kSink && e.to >= n)) return false;
    out[e.from] += e.weight;
    if (e.to != kSink) in[e.to] += e.weight;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (std::fabs(fn.types.prob(v) + in[v] - out[v]) > tol) return false;
  }
  return true;
}

std::vector<std::vector<double>> virtual_transform(const FlowNetwork& fn) {
  const TypeSpace& ts = fn.types;
  const int m = ts.m();
  std::vector<std::vector<double>> phi(ts.size());
  for (std::size_t v = 0; v < ts.size(); ++v) phi[v] = ts.values(v);
  std::vector<std::vector<double>> acc(ts.size(), std::vector<double>(m, 0.0));
  for (const auto& e : fn.edges) {
    if (e.to == kSink) continue;
    for (int k = 0; k < m; ++k) {
      acc[e.to][k] += e.weight * (ts.value(e.from, k) - ts.value(e.to, k));
    }
  }
  for (std::size_t v = 0; v < ts.size(); ++v) {
    const double f = ts.prob(v);
    for (int k = 0; k < m; ++k) phi[v][k] -= acc[v][k] / f;
  }
  return phi;
}

BoundReport single_bidder_bound_terms(const ProductDist& f, RegionMode mode,
                                      const McOptions& mc) {
  if (!f.all_discrete()) return mc_bound(f, 1, mode, mc);
  TypeSpace ts(f);
  const int m = ts.m();
  std::vector<double> terms(static_cast<std::size_t>(m), 0.0), scratch;
  for (std::size_t idx = 0; idx < ts.size(); ++idx) {
    const int r = region_of_type(ts, idx, mode, scratch);
    const double p = ts.prob(idx);
    for (int j = 0; j < m; ++j) {
      const std::size_t t = ts.digit(idx, j);
      terms[j] += p * g_term(r, j, ts.item(j).virtual_value_at(t), ts.item(j).value(t));
    }
  }
  BoundReport rep;
  for (double t : terms) rep.items.push_back(Estimate::exact(t));
  rep.total = sum_estimates(rep.items);
  return rep;
}

Estimate single_bidder_bound(const ProductDist& f, RegionMode mode, const McOptions& mc) {
  return single_bidder_bound_terms(f, mode, mc).total;
}

BoundReport multi_bidder_bound_terms(const ProductDist& f, int n, RegionMode mode,
                                     const McOptions& mc) {
  if (n < 1) throw std::invalid_argument("multi_bidder_bound: n must be >= 1");
  if (!f.all_discrete()) return mc_bound(f, n, mode, mc);
  // The max over bidders separates per item, and bidders are iid, so each
  // term is E[max of n iid copies] of a single-bidder law.
  TypeSpace ts(f);
  const int m = ts.m();
  std::vector<std::vector<std::pair<double, double>>> law(static_cast<std::size_t>(m));
  std::vector<double> scratch;
  for (std::size_t idx = 0; idx < ts.size(); ++idx) {
    const int r = region_of_type(ts, idx, mode, scratch);
    const double p = ts.prob(idx);
    for (int j = 0; j < m; ++j) {
      const std::size_t t = ts.digit(idx, j);
      law[j].push_back({g_term(r, j, ts.item(j).virtual_value_at(t), ts.item(j).value(t)), p});
    }
  }
  BoundReport rep;
  for (int j = 0; j < m; ++j) rep.items.push_back(Estimate::exact(expected_max_iid(law[j], n)));
  rep.total = sum_estimates(rep.items);
  return rep;
}

Estimate multi_bidder_bound(const ProductDist& f, int n, RegionMode mode, const McOptions& mc) {
  return multi_bidder_bound_terms(f, n, mode, mc).total;
}

Estimate rev_j_bound(const ProductDist& f, int n, int j, RegionMode mode, const McOptions& mc) {
  if (n < 1) throw std::invalid_argument("rev_j_bound: n must be >= 1");
  const int m = f.m();
  if (j < 0 || j >= m) throw std::invalid_argument("rev_j_bound: item out of range");
  const Distribution& dj = f.items[j];

  if (!f.all_discrete()) {
    return monte_carlo_scalar(
        [&](RandomStream& rng) {
          std::vector<double> top(static_cast<std::size_t>(m)), v(static_cast<std::size_t>(m));
          double second = 0.0;
          for (int i = 0; i < n; ++i) {
            for (int k = 0; k < m; ++k) v[k] = sample_capped(f.items[k], rng);
            if (i == 0 || v[j] > top[j]) {
              if (i > 0) second = std::max(second, top[j]);
              top = v;
            } else {
              second = std::max(second, v[j]);
            }
          }
          if (region_of(top, f, mode) == j) {
            return std::max(dj.virtual_value(top[j]), second);
          }
          return top[j];
        },
        mc);
  }

  TypeSpace ts(f);
  const DiscreteDist& d = dj.discrete();
  const std::size_t s = d.size();
  // Probability that the top bidder, holding atom t for item j, lies in R_j.
  std::vector<double> in_region(s, 0.0);
  std::vector<double> scratch;
  for (std::size_t idx = 0; idx < ts.size(); ++idx) {
    if (region_of_type(ts, idx, mode, scratch) == j) {
      in_region[ts.digit(idx, j)] += ts.prob(idx) / d.prob(ts.digit(idx, j));
    }
  }
  auto G = [&](std::size_t t) { return d.cdf_at(t); };
  auto Gb = [&](std::size_t t) { return d.cdf_below(t); };
  double total = 0.0;
  for (std::size_t t = 0; t < s; ++t) {
    const double a = d.value(t), phi = d.virtual_value_at(t);
    const double pr = std::min(1.0, in_region[t]);
    auto add = [&](double prob, double second) {
      total += prob * (pr * std::max(phi, second) + (1.0 - pr) * a);
    };
    if (n == 1) {
      add(d.prob(t), 0.0);
      continue;
    }
    for (std::size_t u = 0; u < t; ++u) {
      add(n * d.prob(t) * (std::pow(G(u), n - 1) - std::pow(Gb(u), n - 1)), d.value(u));
    }
    add(std::pow(G(t), n) - std::pow(Gb(t), n) - n * d.prob(t) * std::pow(Gb(t), n - 1), a);
  }
  return Estimate::exact(total);
}

}  // namespace bklab
