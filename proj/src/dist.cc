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

#include "bklab/dist.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bklab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool near(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b));
}

}  // namespace

DiscreteDist::DiscreteDist(std::vector<double> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
  if (values_.empty()) throw std::invalid_argument("DiscreteDist: no atoms");
  if (values_.size() != probs_.size()) {
    throw std::invalid_argument("DiscreteDist: values/probs size mismatch");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t])) {
      throw std::invalid_argument("DiscreteDist: non-finite value");
    }
    if (t > 0 && !(values_[t] > values_[t - 1])) {
      throw std::invalid_argument("DiscreteDist: values not strictly ascending");
    }
    if (!(probs_[t] > 0.0)) {
      throw std::invalid_argument("DiscreteDist: probabilities must be > 0");
    }
    total += probs_[t];
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("DiscreteDist: probabilities do not sum to 1");
  }
  const std::size_t n = values_.size();
  cum_.resize(n);
  tail_.resize(n);
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    acc += probs_[t];
    cum_[t] = acc;
  }
  cum_[n - 1] = 1.0;
  tail_[n - 1] = 0.0;
  for (std::size_t t = n - 1; t-- > 0;) tail_[t] = tail_[t + 1] + probs_[t + 1];
}

DiscreteDist DiscreteDist::point_mass(double v) { return DiscreteDist({v}, {1.0}); }

DiscreteDist DiscreteDist::uniform(std::vector<double> values) {
  const std::size_t n = values.size();
  std::vector<double> p(n, n ? 1.0 / static_cast<double>(n) : 0.0);
  return DiscreteDist(std::move(values), std::move(p));
}

double DiscreteDist::cdf(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  if (it == values_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - values_.begin()) - 1];
}

double DiscreteDist::quantile(double q) const {
  if (q <= 0.0) return values_.front();
  const auto it = std::lower_bound(cum_.begin(), cum_.end(), q);
  if (it == cum_.end()) return values_.back();
  return values_[static_cast<std::size_t>(it - cum_.begin())];
}

double DiscreteDist::virtual_value_at(std::size_t t) const {
  if (t + 1 >= values_.size()) return values_.back();
  return values_[t] - (values_[t + 1] - values_[t]) * tail_[t] / probs_[t];
}

std::optional<std::size_t> DiscreteDist::index_of(double v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it != values_.end() && near(*it, v)) {
    return static_cast<std::size_t>(it - values_.begin());
  }
  if (it != values_.begin() && near(*(it - 1), v)) {
    return static_cast<std::size_t>(it - values_.begin()) - 1;
  }
  return std::nullopt;
}

double DiscreteDist::mean() const {
  double s = 0.0;
  for (std::size_t t = 0; t < values_.size(); ++t) s += values_[t] * probs_[t];
  return s;
}

Distribution::Distribution(DiscreteDist d) : rep_(std::move(d)) {}

Distribution::Distribution(EqualRevenueCapped d) : rep_(d) {
  if (!(d.k > 1.0) || !std::isfinite(d.k)) {
    throw std::invalid_argument("EqualRevenueCapped: need finite k > 1");
  }
}

Distribution::Distribution(ShiftedEqualRevenue d) : rep_(d) {
  if (!(d.k >= 1.0) || !std::isfinite(d.k)) {
    throw std::invalid_argument("ShiftedEqualRevenue: need finite k >= 1");
  }
}

bool Distribution::is_discrete() const {
  return std::holds_alternative<DiscreteDist>(rep_);
}

const DiscreteDist& Distribution::discrete() const {
  if (!is_discrete()) throw std::invalid_argument("distribution is not discrete");
  return std::get<DiscreteDist>(rep_);
}

std::string Distribution::kind() const {
  return std::visit(Overloaded{
                        [](const DiscreteDist&) { return std::string("discrete"); },
                        [](const EqualRevenueCapped&) {
                          return std::string("equal_revenue_capped");
                        },
                        [](const ShiftedEqualRevenue&) {
                          return std::string("shifted_equal_revenue");
                        },
                    },
                    rep_);
}

double Distribution::cdf(double x) const {
  return std::visit(Overloaded{
                        [x](const DiscreteDist& d) { return d.cdf(x); },
                        [x](const EqualRevenueCapped& d) {
                          if (x < 1.0) return 0.0;
                          if (x >= d.k) return 1.0;
                          return 1.0 - 1.0 / x;
                        },
                        [x](const ShiftedEqualRevenue& d) {
                          if (x <= d.k) return 0.0;
                          return 1.0 - 1.0 / (x - d.k + 1.0);
                        },
                    },
                    rep_);
}

double Distribution::quantile(double q) const {
  if (std::isnan(q) || q < 0.0 || q > 1.0) {
    throw std::domain_error("quantile: q outside [0,1]");
  }
  return std::visit(Overloaded{
                        [q](const DiscreteDist& d) { return d.quantile(q); },
                        [q](const EqualRevenueCapped& d) {
                          if (q >= 1.0) return d.k;
                          return std::min(d.k, std::max(1.0, 1.0 / (1.0 - q)));
                        },
                        [q](const ShiftedEqualRevenue& d) {
                          if (q >= 1.0) return kInf;
                          return d.k - 1.0 + 1.0 / (1.0 - q);
                        },
                    },
                    rep_);
}

double Distribution::sample(RandomStream& rng) const {
  return quantile(rng.uniform01());
}

double Distribution::virtual_value(double v) const {
  return std::visit(
      Overloaded{
          [v](const DiscreteDist& d) {
            const auto t = d.index_of(v);
            if (!t) throw std::domain_error("virtual_value: value outside support");
            return d.virtual_value_at(*t);
          },
          [v](const EqualRevenueCapped& d) {
            if (!(v >= 1.0) || v > d.k) {
              throw std::domain_error("virtual_value: value outside support");
            }
            // 1/f(x) * (1-F(x)) = x^2 * (1/x) = x on the continuous part.
            return v >= d.k ? d.k : 0.0;
          },
          [v](const ShiftedEqualRevenue& d) {
            if (!(v >= d.k) || !std::isfinite(v)) {
              throw std::domain_error("virtual_value: value outside support");
            }
            return d.k - 1.0;
          },
      },
      rep_);
}

double Distribution::mass(double v) const {
  return std::visit(Overloaded{
                        [v](const DiscreteDist& d) {
                          const auto t = d.index_of(v);
                          return t ? d.prob(*t) : 0.0;
                        },
                        [v](const EqualRevenueCapped& d) {
                          return v == d.k ? 1.0 / d.k : 0.0;
                        },
                        [](const ShiftedEqualRevenue&) { return 0.0; },
                    },
                    rep_);
}

bool Distribution::in_support(double v) const {
  return std::visit(Overloaded{
                        [v](const DiscreteDist& d) { return d.index_of(v).has_value(); },
                        [v](const EqualRevenueCapped& d) { return v >= 1.0 && v <= d.k; },
                        [v](const ShiftedEqualRevenue& d) {
                          return v >= d.k && std::isfinite(v);
                        },
                    },
                    rep_);
}

double Distribution::support_min() const {
  return std::visit(Overloaded{
                        [](const DiscreteDist& d) { return d.values().front(); },
                        [](const EqualRevenueCapped&) { return 1.0; },
                        [](const ShiftedEqualRevenue& d) { return d.k; },
                    },
                    rep_);
}

double Distribution::support_max() const {
  return std::visit(Overloaded{
                        [](const DiscreteDist& d) { return d.values().back(); },
                        [](const EqualRevenueCapped& d) { return d.k; },
                        [](const ShiftedEqualRevenue&) { return kInf; },
                    },
                    rep_);
}

bool Distribution::bounded() const { return std::isfinite(support_max()); }

double Distribution::mean() const {
  return std::visit(Overloaded{
                        [](const DiscreteDist& d) { return d.mean(); },
                        [](const EqualRevenueCapped& d) { return 1.0 + std::log(d.k); },
                        [](const ShiftedEqualRevenue&) { return kInf; },
                    },
                    rep_);
}

bool is_regular(const Distribution& d) {
  if (!d.is_discrete()) {
    // Both analytic families have closed-form monotone virtual values:
    // 0 then k for the capped family, the constant k-1 for the shifted one.
    return true;
  }
  const DiscreteDist& dd = d.discrete();
  double prev = -kInf;
  for (std::size_t t = 0; t < dd.size(); ++t) {
    const double phi = dd.virtual_value_at(t);
    if (phi < prev - 1e-12 * std::max(1.0, std::fabs(prev))) return false;
    prev = phi;
  }
  return true;
}

double monopoly_reserve(const Distribution& d) {
  if (!is_regular(d)) throw std::domain_error("monopoly_reserve: irregular");
  if (!d.is_discrete()) return d.support_min();
  const DiscreteDist& dd = d.discrete();
  for (std::size_t t = 0; t < dd.size(); ++t) {
    if (dd.virtual_value_at(t) >= 0.0) return dd.value(t);
  }
  throw std::domain_error("monopoly_reserve: no support value with phi >= 0");
}

DiscreteDist discretize(const Distribution& d, int grid_size, double tail_mass) {
  if (grid_size < 2) throw std::invalid_argument("discretize: grid_size < 2");
  if (!(tail_mass > 0.0) || tail_mass >= 1.0) {
    throw std::invalid_argument("discretize: tail_mass outside (0,1)");
  }
  const double g = static_cast<double>(grid_size);
  const double q_cap = d.bounded() ? 1.0 : 1.0 - tail_mass;
  std::vector<double> values;
  std::vector<double> probs;
  for (int i = 1; i <= grid_size; ++i) {
    const double x = d.quantile(std::min(static_cast<double>(i) / g, q_cap));
    if (!values.empty() && x <= values.back()) {
      probs.back() += 1.0 / g;
    } else {
      values.push_back(x);
      probs.push_back(1.0 / g);
    }
  }
  double s = 0.0;
  for (double p : probs) s += p;
  for (double& p : probs) p /= s;
  return DiscreteDist(std::move(values), std::move(probs));
}

ProductDist::ProductDist(std::vector<Distribution> it) : items(std::move(it)) {
  if (items.empty()) throw std::invalid_argument("ProductDist: m must be >= 1");
}

ProductDist ProductDist::iid(const Distribution& d, int m) {
  if (m < 1) throw std::invalid_argument("ProductDist: m must be >= 1");
  return ProductDist(std::vector<Distribution>(static_cast<std::size_t>(m), d));
}

bool ProductDist::all_discrete() const {
  return std::all_of(items.begin(), items.end(),
                     [](const Distribution& d) { return d.is_discrete(); });
}

}  // namespace bklab
