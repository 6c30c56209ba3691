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

#ifndef BKLAB_DIST_H_
#define BKLAB_DIST_H_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bklab/random.h"

namespace bklab {

class DiscreteDist {
 public:
  DiscreteDist(std::vector<double> values, std::vector<double> probs);

  static DiscreteDist point_mass(double v);
  static DiscreteDist uniform(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return values_.size(); }
  double value(std::size_t t) const { return values_[t]; }
  double prob(std::size_t t) const { return probs_[t]; }

  // F(v_t) and F(v_t^-) by atom index.
  double cdf_at(std::size_t t) const { return cum_[t]; }
  double cdf_below(std::size_t t) const { return t == 0 ? 0.0 : cum_[t - 1]; }
  // 1 - F(v_t), accumulated from the top so small tails keep precision.
  double tail_above(std::size_t t) const { return tail_[t]; }

  double cdf(double x) const;
  double quantile(double q) const;
  double virtual_value_at(std::size_t t) const;
  std::optional<std::size_t> index_of(double v) const;
  double mean() const;

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<double> cum_;
  std::vector<double> tail_;
};

// CDF 1 - 1/x on [1,k) plus an atom of mass 1/k at k.
struct EqualRevenueCapped {
  double k;
};

// CDF 1 - 1/(x-k+1) on [k,inf).  Infinite mean.
struct ShiftedEqualRevenue {
  double k;
};

class Distribution {
 public:
  Distribution(DiscreteDist d);  // NOLINT: implicit by design
  Distribution(EqualRevenueCapped d);  // NOLINT
  Distribution(ShiftedEqualRevenue d);  // NOLINT

  bool is_discrete() const;
  const DiscreteDist& discrete() const;
  const std::variant<DiscreteDist, EqualRevenueCapped, ShiftedEqualRevenue>&
  rep() const {
    return rep_;
  }
  std::string kind() const;

  double cdf(double x) const;
  double quantile(double q) const;
  double sample(RandomStream& rng) const;
  // Throws std::domain_error outside the support.
  double virtual_value(double v) const;
  // Probability of the atom at v (0 on continuous parts).
  double mass(double v) const;
  bool in_support(double v) const;
  double support_min() const;
  double support_max() const;  // +inf for unbounded families
  bool bounded() const;
  double mean() const;  // +inf for ShiftedEqualRevenue

 private:
  std::variant<DiscreteDist, EqualRevenueCapped, ShiftedEqualRevenue> rep_;
};

bool is_regular(const Distribution& d);
double monopoly_reserve(const Distribution& d);

inline constexpr double kDefaultTailMass = 1e-6;
DiscreteDist discretize(const Distribution& d, int grid_size,
                        double tail_mass = kDefaultTailMass);

struct ProductDist {
  std::vector<Distribution> items;

  explicit ProductDist(std::vector<Distribution> it);
  static ProductDist iid(const Distribution& d, int m);

  int m() const { return static_cast<int>(items.size()); }
  bool all_discrete() const;
};

}  // namespace bklab

#endif  // BKLAB_DIST_H_
