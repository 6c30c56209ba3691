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

#include "bklab/setsys.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace bklab {

std::vector<int> items_of(ItemSet s) {
  std::vector<int> out;
  while (s) {
    out.push_back(__builtin_ctz(s));
    s &= s - 1;
  }
  return out;
}

ItemSet make_set(std::span<const int> items) {
  ItemSet s = 0;
  for (int j : items) {
    if (j < 0 || j >= SetSystem::kMaxItems) {
      throw std::invalid_argument("make_set: item index out of range");
    }
    s |= ItemSet{1} << j;
  }
  return s;
}

namespace {

void check_m(int m, int limit) {
  if (m < 1 || m > limit) {
    throw std::invalid_argument("SetSystem: m must be in [1, " +
                                std::to_string(limit) + "]");
  }
}

}  // namespace

SetSystem SetSystem::full(int m) {
  check_m(m, kMaxItems);
  return SetSystem(Kind::kFull, m);
}

SetSystem SetSystem::uniform(int m, int k) {
  check_m(m, kMaxItems);
  if (k < 1) throw std::invalid_argument("SetSystem: uniform rank must be >= 1");
  SetSystem s(Kind::kUniform, m);
  s.k_ = k;
  return s;
}

SetSystem SetSystem::partition(int m, std::vector<ItemSet> blocks,
                               std::vector<int> caps) {
  check_m(m, kMaxItems);
  if (blocks.size() != caps.size()) {
    throw std::invalid_argument("SetSystem: one cap per block required");
  }
  ItemSet seen = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b] == 0 || (blocks[b] & seen) || (blocks[b] & ~all_items(m))) {
      throw std::invalid_argument("SetSystem: blocks must be disjoint, non-empty, in range");
    }
    if (caps[b] < 1) throw std::invalid_argument("SetSystem: caps must be >= 1");
    seen |= blocks[b];
  }
  if (seen != all_items(m)) throw std::invalid_argument("SetSystem: blocks must cover [m]");
  SetSystem s(Kind::kPartition, m);
  s.blocks_ = std::move(blocks);
  s.caps_ = std::move(caps);
  return s;
}

SetSystem SetSystem::explicit_family(int m, std::span<const ItemSet> feasible) {
  check_m(m, kMaxExplicitItems);
  SetSystem s(Kind::kExplicit, m);
  const std::size_t universe = std::size_t{1} << m;
  s.member_.assign(universe, 0);
  for (ItemSet f : feasible) {
    if (f & ~all_items(m)) throw std::invalid_argument("SetSystem: set outside [m]");
    s.member_[f] = 1;
  }
  if (!s.member_[0]) throw std::invalid_argument("SetSystem: family must contain the empty set");
  for (int j = 0; j < m; ++j) {
    if (!s.member_[ItemSet{1} << j]) {
      throw std::invalid_argument("SetSystem: family must contain every singleton");
    }
  }
  for (std::size_t f = 1; f < universe; ++f) {
    if (!s.member_[f]) continue;
    for (ItemSet r = static_cast<ItemSet>(f); r; r &= r - 1) {
      const ItemSet sub = static_cast<ItemSet>(f) & ~(r & (~r + 1));
      if (!s.member_[sub]) {
        throw std::invalid_argument("SetSystem: family is not downward-closed");
      }
    }
  }
  // Largest feasible subset size of every mask.
  s.rank_.assign(universe, 0);
  for (std::size_t f = 1; f < universe; ++f) {
    if (s.member_[f]) {
      s.rank_[f] = static_cast<std::uint8_t>(set_size(static_cast<ItemSet>(f)));
      continue;
    }
    std::uint8_t best = 0;
    for (ItemSet r = static_cast<ItemSet>(f); r; r &= r - 1) {
      best = std::max(best, s.rank_[f & ~(r & (~r + 1))]);
    }
    s.rank_[f] = best;
  }
  // Matroid iff every feasible I is maximum inside the largest set where it
  // is maximal, namely I plus every item that cannot be added to I.
  s.matroid_ = true;
  for (std::size_t f = 0; f < universe && s.matroid_; ++f) {
    if (!s.member_[f]) continue;
    ItemSet closure = static_cast<ItemSet>(f);
    for (int j = 0; j < m; ++j) {
      const ItemSet bit = ItemSet{1} << j;
      if (!(f & bit) && !s.member_[f | bit]) closure |= bit;
    }
    if (s.rank_[closure] != set_size(static_cast<ItemSet>(f))) s.matroid_ = false;
  }
  return s;
}

std::vector<ItemSet> SetSystem::feasible_sets() const {
  std::vector<ItemSet> out;
  if (kind_ == Kind::kExplicit) {
    for (std::size_t f = 0; f < member_.size(); ++f) {
      if (member_[f]) out.push_back(static_cast<ItemSet>(f));
    }
    return out;
  }
  if (m_ > kMaxExplicitItems) throw std::length_error("feasible_sets: m too large");
  for (ItemSet f = 0; f <= all_items(m_); ++f) {
    if (is_feasible(f)) out.push_back(f);
    if (f == all_items(m_)) break;
  }
  return out;
}

void SetSystem::check_subset(ItemSet s) const {
  if (s & ~all_items(m_)) throw std::invalid_argument("SetSystem: subset outside [m]");
}

bool SetSystem::is_feasible(ItemSet s) const {
  if (s & ~all_items(m_)) return false;
  switch (kind_) {
    case Kind::kFull:
      return true;
    case Kind::kUniform:
      return set_size(s) <= k_;
    case Kind::kPartition:
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (set_size(s & blocks_[b]) > caps_[b]) return false;
      }
      return true;
    case Kind::kExplicit:
      return member_[s] != 0;
  }
  return false;
}

double SetSystem::value_of(std::span<const double> weights, ItemSet s) const {
  check_subset(s);
  if (weights.size() != static_cast<std::size_t>(m_)) {
    throw std::invalid_argument("value_of: need one weight per item");
  }
  if (kind_ == Kind::kExplicit) {
    double best = 0.0;
    for (ItemSet t = s;; t = (t - 1) & s) {
      if (member_[t]) {
        double w = 0.0;
        for (ItemSet r = t; r; r &= r - 1) w += weights[__builtin_ctz(r)];
        best = std::max(best, w);
      }
      if (t == 0) break;
    }
    return best;
  }
  if (kind_ == Kind::kFull) {
    double w = 0.0;
    for (ItemSet r = s; r; r &= r - 1) w += std::max(0.0, weights[__builtin_ctz(r)]);
    return w;
  }
  // Greedy is exact for uniform and partition matroids.
  std::vector<int> order = items_of(s);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] > weights[b]; });
  ItemSet taken = 0;
  double w = 0.0;
  for (int j : order) {
    if (weights[j] <= 0.0) break;
    if (can_add(taken, j)) {
      taken |= ItemSet{1} << j;
      w += weights[j];
    }
  }
  return w;
}

int SetSystem::feasible_rank(ItemSet s) const {
  switch (kind_) {
    case Kind::kFull:
      return set_size(s);
    case Kind::kUniform:
      return std::min(set_size(s), k_);
    case Kind::kPartition: {
      int r = 0;
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        r += std::min(set_size(s & blocks_[b]), caps_[b]);
      }
      return r;
    }
    case Kind::kExplicit:
      return rank_[s];
  }
  return 0;
}

int SetSystem::rank(ItemSet s) const {
  check_subset(s);
  if (!matroid_) throw std::domain_error("rank: family is not a matroid");
  return feasible_rank(s);
}

bool SetSystem::spans(ItemSet s, int j) const {
  if (j < 0 || j >= m_) throw std::invalid_argument("spans: item out of range");
  if (has_item(s, j)) throw std::invalid_argument("spans: item already in set");
  return rank(s | (ItemSet{1} << j)) == rank(s);
}

bool check_exchange_axiom(const SetSystem& s) {
  const std::vector<ItemSet> fam = s.feasible_sets();
  for (ItemSet a : fam) {
    for (ItemSet b : fam) {
      if (set_size(b) <= set_size(a)) continue;
      bool ok = false;
      for (ItemSet r = b & ~a; r && !ok; r &= r - 1) {
        ok = s.is_feasible(a | (r & (~r + 1)));
      }
      if (!ok) return false;
    }
  }
  return true;
}

std::vector<ItemSet> minimal_spanning_sets(const SetSystem& s, int j) {
  const int m = s.m();
  if (m > SetSystem::kMaxRhoItems) {
    throw std::length_error("disjoint spanning search limited to m <= 12");
  }
  if (!s.is_matroid()) throw std::domain_error("spanning sets need a matroid");
  if (j < 0 || j >= m) throw std::invalid_argument("item out of range");
  const ItemSet jbit = ItemSet{1} << j;
  std::vector<ItemSet> out;
  const ItemSet others = all_items(m) & ~jbit;
  for (ItemSet a = others;; a = (a - 1) & others) {
    // A feasible set spans j exactly when adding j breaks feasibility.
    if (a != 0 && s.is_feasible(a) && !s.is_feasible(a | jbit)) {
      bool minimal = true;
      for (ItemSet r = a; r && minimal; r &= r - 1) {
        minimal = s.is_feasible((a & ~(r & (~r + 1))) | jbit);
      }
      if (minimal) out.push_back(a);
    }
    if (a == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

int disjoint_spanning_number_of(const SetSystem& s, int j) {
  const std::vector<ItemSet> sets = minimal_spanning_sets(s, j);
  std::unordered_map<ItemSet, int> memo;
  // Branch on the lowest available item: unused, or covered by one set.
  auto best = [&](auto&& self, ItemSet avail) -> int {
    if (avail == 0) return 0;
    if (auto it = memo.find(avail); it != memo.end()) return it->second;
    const ItemSet low = avail & (~avail + 1);
    int b = self(self, avail & ~low);
    for (ItemSet a : sets) {
      if ((a & low) && (a & ~avail) == 0) b = std::max(b, 1 + self(self, avail & ~a));
    }
    memo.emplace(avail, b);
    return b;
  };
  return best(best, all_items(s.m()) & ~(ItemSet{1} << j));
}

int disjoint_spanning_number(const SetSystem& s) {
  int rho = 0;
  for (int j = 0; j < s.m(); ++j) rho = std::max(rho, disjoint_spanning_number_of(s, j));
  return rho;
}

}  // namespace bklab
