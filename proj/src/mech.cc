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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bklab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Highest entry, lowest index among ties.  -1 when empty.
int argmax_first(std::span<const double> xs) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    if (best < 0 || xs[i] > xs[best]) best = i;
  }
  return best;
}

Outcome single_item_outcome(int n, int winner, double price, double bid) {
  Outcome o;
  o.assignment = {winner};
  o.payments.assign(static_cast<std::size_t>(n), 0.0);
  if (winner != kUnallocated) {
    o.payments[winner] = price;
    o.welfare = bid;
  }
  return o;
}

double bidder_value(const Profile& p, int i, ItemSet s) {
  double v = 0.0;
  for (ItemSet r = s; r; r &= r - 1) v += p.values[i][__builtin_ctz(r)];
  return v;
}

void check_size(int n, int m) {
  if (std::pow(static_cast<double>(n) + 1.0, m) > kMaxAssignments) {
    throw std::length_error("exhaustive welfare search limited to (n+1)^m <= 1e7");
  }
}

struct Search {
  const Profile& p;
  const std::vector<bool>& active;
  bool unit;
  int n, m;
  double eps;
  std::vector<double> suffix_ub;
  std::vector<int> assign;
  std::vector<ItemSet> bundles;
  std::vector<int> best_assign;
  double best = -1.0;

  void run(int j, double cur) {
    if (j == m) {
      if (cur > best + eps) {
        best = cur;
        best_assign = assign;
      }
      return;
    }
    if (cur + suffix_ub[j] <= best + eps) return;
    assign[j] = kUnallocated;
    run(j + 1, cur);
    for (int i = 0; i < n; ++i) {
      const double v = p.values[i][j];
      if (!active[i] || v <= 0.0) continue;
      if (unit ? bundles[i] != 0 : !p.constraints[i].can_add(bundles[i], j)) continue;
      assign[j] = i;
      bundles[i] |= ItemSet{1} << j;
      run(j + 1, cur + v);
      bundles[i] &= ~(ItemSet{1} << j);
    }
    assign[j] = kUnallocated;
  }
};

// Externality payments for a fixed welfare solver.
template <class Solver>
Outcome with_externality_payments(const Profile& p, Solver solve) {
  const int n = p.n();
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  const Allocation a = solve(active);
  Outcome o;
  o.assignment = a.assignment;
  o.welfare = a.welfare;
  o.payments.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const ItemSet s = o.bundle(i);
    if (s == 0) continue;
    active[i] = false;
    const double w_minus = solve(active).welfare;
    active[i] = true;
    const double pay = w_minus - (a.welfare - bidder_value(p, i, s));
    o.payments[i] = std::max(0.0, pay);
  }
  return o;
}

}  // namespace

Profile::Profile(ValueMatrix v, std::vector<SetSystem> c)
    : values(std::move(v)), constraints(std::move(c)) {
  if (values.empty() || values.front().empty()) {
    throw std::invalid_argument("Profile: need n >= 1 and m >= 1");
  }
  const std::size_t m = values.front().size();
  for (const auto& row : values) {
    if (row.size() != m) throw std::invalid_argument("Profile: ragged value matrix");
    for (double x : row) {
      if (!std::isfinite(x) || x < 0.0) {
        throw std::invalid_argument("Profile: values must be finite and >= 0");
      }
    }
  }
  if (constraints.size() != values.size()) {
    throw std::invalid_argument("Profile: one constraint per bidder");
  }
  for (const auto& s : constraints) {
    if (s.m() != static_cast<int>(m)) {
      throw std::invalid_argument("Profile: constraint item count mismatch");
    }
  }
}

Profile Profile::additive(ValueMatrix v) {
  const int m = v.empty() ? 1 : static_cast<int>(v.front().size());
  std::vector<SetSystem> c(v.size(), SetSystem::full(std::max(1, m)));
  return Profile(std::move(v), std::move(c));
}

Profile Profile::uniform_constraint(ValueMatrix v, const SetSystem& s) {
  std::vector<SetSystem> c(v.size(), s);
  return Profile(std::move(v), std::move(c));
}

double Outcome::revenue() const {
  return std::accumulate(payments.begin(), payments.end(), 0.0);
}

ItemSet Outcome::bundle(int bidder) const {
  ItemSet s = 0;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (assignment[j] == bidder) s |= ItemSet{1} << j;
  }
  return s;
}

std::vector<int> Outcome::unallocated_bidders() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(payments.size()); ++i) {
    if (bundle(i) == 0) out.push_back(i);
  }
  return out;
}

Outcome spa_lazy(std::span<const double> bids, std::span<const double> reserves) {
  if (bids.empty()) throw std::invalid_argument("spa_lazy: need at least one bid");
  if (reserves.size() != bids.size()) {
    throw std::invalid_argument("spa_lazy: one reserve per bidder");
  }
  const int n = static_cast<int>(bids.size());
  const int top = argmax_first(bids);
  if (bids[top] < reserves[top]) return single_item_outcome(n, kUnallocated, 0, 0);
  double second = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i != top) second = std::max(second, bids[i]);
  }
  return single_item_outcome(n, top, std::max(second, reserves[top]), bids[top]);
}

Outcome mechanism_m(std::span<const double> bids, int j_star, const Distribution& d) {
  if (j_star < 0 || j_star >= static_cast<int>(bids.size())) {
    throw std::invalid_argument("mechanism_m: reserve bidder out of range");
  }
  std::vector<double> r(bids.size(), 0.0);
  r[j_star] = monopoly_reserve(d);
  return spa_lazy(bids, r);
}

Outcome myerson_single(std::span<const double> bids, const Distribution& d) {
  std::vector<double> r(bids.size(), monopoly_reserve(d));
  return spa_lazy(bids, r);
}

Allocation max_welfare(const Profile& p, const std::vector<bool>& active, bool unit_demand) {
  const int n = p.n(), m = p.m();
  check_size(n, m);
  if (active.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("max_welfare: active mask size mismatch");
  }
  Search s{p, active, unit_demand, n, m, 0.0, {}, {}, {}, {}, -1.0};
  s.suffix_ub.assign(static_cast<std::size_t>(m) + 1, 0.0);
  for (int j = m - 1; j >= 0; --j) {
    double top = 0.0;
    for (int i = 0; i < n; ++i) {
      if (active[i]) top = std::max(top, p.values[i][j]);
    }
    s.suffix_ub[j] = s.suffix_ub[j + 1] + top;
  }
  s.eps = 1e-12 * (1.0 + s.suffix_ub[0]);
  s.assign.assign(static_cast<std::size_t>(m), kUnallocated);
  s.bundles.assign(static_cast<std::size_t>(n), 0);
  s.run(0, 0.0);
  return {s.best_assign, s.best};
}

Allocation max_weight_matching(const Profile& p, const std::vector<bool>& active) {
  const int n = p.n(), m = p.m();
  const int sz = std::max(n, m);
  // Hungarian method on the square cost matrix -v, 1-indexed.
  auto cost = [&](int i, int j) {
    if (i >= n || j >= m || !active[i]) return 0.0;
    return -p.values[i][j];
  };
  std::vector<double> u(sz + 1, 0.0), v(sz + 1, 0.0), minv(sz + 1);
  std::vector<int> match(sz + 1, 0), way(sz + 1, 0);
  std::vector<bool> used(sz + 1);
  for (int i = 1; i <= sz; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= sz; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= sz; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  Allocation a;
  a.assignment.assign(static_cast<std::size_t>(m), kUnallocated);
  for (int j = 1; j <= m; ++j) {
    const int i = match[j] - 1;
    if (i < n && active[i] && p.values[i][j - 1] > 0.0) {
      a.assignment[j - 1] = i;
      a.welfare += p.values[i][j - 1];
    }
  }
  return a;
}

Outcome vcg_additive(const Profile& p) {
  for (const auto& s : p.constraints) {
    if (s.kind() != SetSystem::Kind::kFull) {
      throw std::invalid_argument("vcg_additive: all constraints must be Full");
    }
  }
  const int n = p.n(), m = p.m();
  Outcome o;
  o.assignment.assign(static_cast<std::size_t>(m), kUnallocated);
  o.payments.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) col[i] = p.values[i][j];
    const int top = argmax_first(col);
    if (col[top] <= 0.0) continue;
    double second = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i != top) second = std::max(second, col[i]);
    }
    o.assignment[j] = top;
    o.payments[top] += second;
    o.welfare += col[top];
  }
  return o;
}

Outcome vcg_constrained(const Profile& p) {
  check_size(p.n(), p.m());
  return with_externality_payments(
      p, [&](const std::vector<bool>& active) { return max_welfare(p, active); });
}

Outcome vcg_ud(const Profile& p) {
  const bool small = std::pow(p.n() + 1.0, p.m()) <= 1e6;
  return with_externality_payments(p, [&](const std::vector<bool>& active) {
    return small ? max_welfare(p, active, true) : max_weight_matching(p, active);
  });
}

BidSpace BidSpace::of(const Distribution& d) {
  BidSpace b;
  if (d.is_discrete()) b.atoms = d.discrete().values();
  b.lo = d.support_min();
  return b;
}

double critical_payment(const AllocationRule& rule, std::span<const double> bids,
                        int winner, const BidSpace& space) {
  if (winner < 0 || winner >= static_cast<int>(bids.size())) {
    throw std::invalid_argument("critical_payment: winner out of range");
  }
  std::vector<double> b(bids.begin(), bids.end());
  const double own = b[winner];
  if (rule(b) != winner) throw std::invalid_argument("critical_payment: bidder does not win");
  auto wins_at = [&](double x) {
    b[winner] = x;
    const bool w = rule(b) == winner;
    b[winner] = own;
    return w;
  };

  if (!space.atoms.empty()) {
    std::vector<double> cand;
    for (double a : space.atoms) {
      if (a < own) cand.push_back(a);
    }
    cand.push_back(own);
    std::size_t first = cand.size();
    for (std::size_t t = 0; t < cand.size(); ++t) {
      if (wins_at(cand[t])) {
        first = t;
        break;
      }
    }
    for (std::size_t t = first; t < cand.size(); ++t) {
      if (!wins_at(cand[t])) throw std::domain_error("critical_payment: rule not monotone");
    }
    for (double a : space.atoms) {
      if (a > own && !wins_at(a)) throw std::domain_error("critical_payment: rule not monotone");
    }
    return cand[first];
  }

  double lo = std::min(space.lo, own);
  if (wins_at(lo)) return lo;
  double hi = own;
  const double tol = 1e-12 * std::max(1.0, std::fabs(own));
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (wins_at(mid) ? hi : lo) = mid;
  }
  for (int k = 1; k <= 8; ++k) {
    if (!wins_at(hi + (own - hi) * k / 8.0)) {
      throw std::domain_error("critical_payment: rule not monotone");
    }
  }
  // Thresholds are usually another bid; report it exactly.
  for (int i = 0; i < static_cast<int>(bids.size()); ++i) {
    if (i != winner && std::fabs(bids[i] - hi) <= 1e-8) return bids[i];
  }
  return hi;
}

int sp_j_winner(std::span<const double> bids, int j, const Distribution& dj, int n, int m) {
  if (n < 1 || m < 1 || j < 0 || j >= m) throw std::invalid_argument("sp_j: bad n, m or j");
  if (bids.size() != static_cast<std::size_t>(2 * n + 2 * m - 2)) {
    throw std::invalid_argument("sp_j: need exactly 2n+2m-2 bids");
  }
  const auto u = bids.subspan(0, n);
  const auto ext = bids.subspan(n, m - 1);
  const auto w = bids.subspan(n + m - 1);
  const int u1 = argmax_first(u);
  const double top = u[u1];
  // Stand-ins need a strictly higher bid; the first of the highest wins.
  int ext_win = -1;
  for (int e = 0; e < m - 1; ++e) {
    if (ext[e] > top && (ext_win < 0 || ext[e] > ext[ext_win])) ext_win = e;
  }
  if (ext_win >= 0) return n + ext_win;
  const int w1 = argmax_first(w);
  double w2 = 0.0;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (i != w1) w2 = std::max(w2, w[i]);
  }
  if (dj.virtual_value(top) > w2) return u1;
  return n + m - 1 + w1;
}

Outcome sp_j(std::span<const double> bids, int j, const Distribution& dj, int n, int m) {
  if (!is_regular(dj)) throw std::domain_error("sp_j: distribution must be regular");
  const int winner = sp_j_winner(bids, j, dj, n, m);
  AllocationRule rule = [&](std::span<const double> b) {
    return sp_j_winner(b, j, dj, n, m);
  };
  BidSpace space = BidSpace::of(dj);
  const double price = critical_payment(rule, bids, winner, space);
  return single_item_outcome(static_cast<int>(bids.size()), winner, price, bids[winner]);
}

double vcg_lower_bound_cert(const Profile& p, const Outcome& o) {
  const std::vector<int> idle = o.unallocated_bidders();
  double cert = 0.0;
  for (int j = 0; j < p.m(); ++j) {
    double best = 0.0;
    for (int i : idle) best = std::max(best, p.values[i][j]);
    cert += best;
  }
  return cert;
}

RChain r_chain(std::span<const int> bidders, const ValueMatrix& values) {
  if (values.empty()) throw std::invalid_argument("r_chain: empty value matrix");
  const int m = static_cast<int>(values.front().size());
  if (static_cast<int>(bidders.size()) < m) {
    throw std::invalid_argument("r_chain: need at least m bidders");
  }
  std::vector<int> left(bidders.begin(), bidders.end());
  std::sort(left.begin(), left.end());
  RChain c;
  for (int j = 0; j < m; ++j) {
    int best = -1;
    for (int i : left) {
      if (best < 0 || values[i][j] > values[best][j]) best = i;
    }
    c.j_star.push_back(best);
    c.r.push_back(values[best][j]);
    left.erase(std::find(left.begin(), left.end(), best));
    c.remaining.push_back(left);
  }
  return c;
}

double vcg_asym_lower_bound_cert(const Profile& p, const Outcome& o) {
  if (p.n() < 2 * p.m()) throw std::invalid_argument("vcg_asym cert: need n >= 2m");
  const std::vector<int> idle = o.unallocated_bidders();
  const RChain c = r_chain(idle, p.values);
  return std::accumulate(c.r.begin(), c.r.end(), 0.0);
}

}  // namespace bklab
