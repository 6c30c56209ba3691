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

#ifndef BKLAB_SETSYS_H_
#define BKLAB_SETSYS_H_

#include <cstdint>
#include <span>
#include <vector>

namespace bklab {

// Item j is bit j.
using ItemSet = std::uint32_t;

inline int set_size(ItemSet s) { return __builtin_popcount(s); }
inline bool has_item(ItemSet s, int j) { return (s >> j) & 1u; }
inline ItemSet all_items(int m) {
  return m >= 32 ? ~ItemSet{0} : ((ItemSet{1} << m) - 1);
}
std::vector<int> items_of(ItemSet s);
ItemSet make_set(std::span<const int> items);

class SetSystem {
 public:
  enum class Kind { kExplicit, kUniform, kPartition, kFull };

  static constexpr int kMaxItems = 31;
  static constexpr int kMaxExplicitItems = 20;
  static constexpr int kMaxRhoItems = 12;

  static SetSystem full(int m);
  static SetSystem uniform(int m, int k);
  static SetSystem partition(int m, std::vector<ItemSet> blocks,
                             std::vector<int> caps);
  // Throws unless the family holds the empty set, every singleton, and is
  // closed under subsets.
  static SetSystem explicit_family(int m, std::span<const ItemSet> feasible);

  Kind kind() const { return kind_; }
  int m() const { return m_; }
  int uniform_k() const { return k_; }
  const std::vector<ItemSet>& blocks() const { return blocks_; }
  const std::vector<int>& caps() const { return caps_; }
  // Members of an Explicit family in increasing mask order.
  std::vector<ItemSet> feasible_sets() const;

  bool is_feasible(ItemSet s) const;
  // max over feasible T within S of sum of weights[j], j in T.
  double value_of(std::span<const double> weights, ItemSet s) const;
  // Throws std::domain_error for non-matroid Explicit families.
  int rank(ItemSet s) const;
  bool spans(ItemSet s, int j) const;
  bool is_matroid() const { return matroid_; }

  // Adding j to a feasible set s stays feasible.
  bool can_add(ItemSet s, int j) const { return is_feasible(s | (ItemSet{1} << j)); }

 private:
  SetSystem(Kind kind, int m) : kind_(kind), m_(m) {}
  void check_subset(ItemSet s) const;
  int feasible_rank(ItemSet s) const;

  Kind kind_;
  int m_;
  int k_ = 0;
  std::vector<ItemSet> blocks_;
  std::vector<int> caps_;
  std::vector<std::uint8_t> member_;  // Explicit only, indexed by mask
  std::vector<std::uint8_t> rank_;    // Explicit only
  bool matroid_ = true;
};

// Exchange-axiom check over every pair of members.
bool check_exchange_axiom(const SetSystem& s);

// rho_j: most pairwise-disjoint feasible sets avoiding j that each span j.
int disjoint_spanning_number_of(const SetSystem& s, int j);
// rho = max_j rho_j.
int disjoint_spanning_number(const SetSystem& s);
// Minimal feasible sets spanning j (circuits through j, minus j).
std::vector<ItemSet> minimal_spanning_sets(const SetSystem& s, int j);

}  // namespace bklab

#endif  // BKLAB_SETSYS_H_
