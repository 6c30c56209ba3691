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

#ifndef BKLAB_MECH_H_
#define BKLAB_MECH_H_

#include <functional>
#include <span>
#include <vector>

#include "bklab/dist.h"
#include "bklab/setsys.h"

namespace bklab {

inline constexpr int kUnallocated = -1;

using ValueMatrix = std::vector<std::vector<double>>;  // bidder x item

struct Profile {
  ValueMatrix values;
  std::vector<SetSystem> constraints;  // one per bidder

  Profile(ValueMatrix v, std::vector<SetSystem> c);
  static Profile additive(ValueMatrix v);
  static Profile uniform_constraint(ValueMatrix v, const SetSystem& s);

  int n() const { return static_cast<int>(values.size()); }
  int m() const { return static_cast<int>(values.front().size()); }
};

struct Outcome {
  std::vector<int> assignment;   // item -> bidder or kUnallocated
  std::vector<double> payments;  // per bidder
  double welfare = 0.0;

  double revenue() const;
  ItemSet bundle(int bidder) const;
  std::vector<int> unallocated_bidders() const;
};

// Second price with lazy reserves.  Single item; bidders tie by lower id.
Outcome spa_lazy(std::span<const double> bids, std::span<const double> reserves);
// Lazy monopoly reserve for bidder j_star only.
Outcome mechanism_m(std::span<const double> bids, int j_star, const Distribution& d);
// Second price with a uniform lazy monopoly reserve.
Outcome myerson_single(std::span<const double> bids, const Distribution& d);

// Welfare maximization by exhaustive search; the lexicographically smallest
// maximizing assignment vector wins (unallocated sorts before bidder 0).
// Bidders with active[i] == false are excluded.
struct Allocation {
  std::vector<int> assignment;
  double welfare = 0.0;
};
inline constexpr double kMaxAssignments = 1e7;
Allocation max_welfare(const Profile& p, const std::vector<bool>& active,
                       bool unit_demand = false);
// Same objective restricted to matchings, by the Hungarian method.
Allocation max_weight_matching(const Profile& p, const std::vector<bool>& active);

Outcome vcg_additive(const Profile& p);
Outcome vcg_constrained(const Profile& p);
Outcome vcg_ud(const Profile& p);

using AllocationRule = std::function<int(std::span<const double>)>;

// Bid space seen by the winner when computing a threshold.  With atoms the
// threshold is the smallest winning atom; otherwise bisection on [lo, bid].
struct BidSpace {
  std::vector<double> atoms;
  double lo = 0.0;
  static BidSpace of(const Distribution& d);
};

double critical_payment(const AllocationRule& rule, std::span<const double> bids,
                        int winner, const BidSpace& space = {});

// Allocation rule of the single-item mechanism over 2n+2m-2 bids for item j:
// n own-group bids, m-1 stand-ins for the other items (in item order, j
// skipped), then n+m-1 fresh bids.
int sp_j_winner(std::span<const double> bids, int j, const Distribution& dj, int n, int m);
Outcome sp_j(std::span<const double> bids, int j, const Distribution& dj, int n, int m);

// Sum over items of the best value among bidders that receive nothing.
double vcg_lower_bound_cert(const Profile& p, const Outcome& o);

struct RChain {
  std::vector<int> j_star;                  // per item
  std::vector<double> r;                    // r_j(S) = v_{j*(S)}(j)
  std::vector<std::vector<int>> remaining;  // remaining[j] = S minus 0*..j*
};
RChain r_chain(std::span<const int> bidders, const ValueMatrix& values);

double vcg_asym_lower_bound_cert(const Profile& p, const Outcome& o);

}  // namespace bklab

#endif  // BKLAB_MECH_H_
