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

#ifndef BKLAB_DUALITY_H_
#define BKLAB_DUALITY_H_

#include <cstddef>
#include <span>
#include <vector>

#include "bklab/dist.h"
#include "bklab/estimate.h"
#include "bklab/typespace.h"

namespace bklab {

enum class RegionMode { kValue, kQuantile };

const char* region_mode_name(RegionMode mode);

// Argmax of v_j (value mode) or F_j(v_j) (quantile mode); lowest index wins
// ties.  Quantiles closer than 1e-12 count as ties.
int region_of(std::span<const double> v, const ProductDist& f, RegionMode mode);

// Region of every type of ts.
std::vector<int> region_assignment(const TypeSpace& ts, RegionMode mode);

inline constexpr std::size_t kSink = static_cast<std::size_t>(-1);

struct FlowEdge {
  std::size_t from;
  std::size_t to;  // a type index or kSink
  double weight;
};

struct FlowNetwork {
  TypeSpace types;
  std::vector<FlowEdge> edges;
};

// Region j pushes its inflow plus own mass one step down coordinate j while
// staying inside region j, and to the sink otherwise.  A region of -1 sends
// the type's flow straight to the sink.  Throws std::invalid_argument when a
// region is not upward-closed in its own coordinate.
FlowNetwork build_region_flow(const TypeSpace& ts, std::span<const int> regions);
FlowNetwork build_region_flow(const ProductDist& f, RegionMode mode);
FlowNetwork all_to_sink_flow(const TypeSpace& ts);

bool check_flow_conservation(const FlowNetwork& fn, double tol = 1e-10);

// Phi(v) = v - (1/f(v)) sum_v' lambda(v', v) (v' - v), one m-vector per type.
std::vector<std::vector<double>> virtual_transform(const FlowNetwork& fn);

// Per-item contributions and their sum.
struct BoundReport {
  std::vector<Estimate> items;
  Estimate total;
};

BoundReport single_bidder_bound_terms(const ProductDist& f, RegionMode mode,
                                      const McOptions& mc = {});
Estimate single_bidder_bound(const ProductDist& f, RegionMode mode, const McOptions& mc = {});

inline constexpr double kExactJointTypes = 1e6;
BoundReport multi_bidder_bound_terms(const ProductDist& f, int n, RegionMode mode,
                                     const McOptions& mc = {});
Estimate multi_bidder_bound(const ProductDist& f, int n, RegionMode mode,
                            const McOptions& mc = {});

// Upper bound on item j's contribution via the top bidder for item j.
Estimate rev_j_bound(const ProductDist& f, int n, int j, RegionMode mode = RegionMode::kQuantile,
                     const McOptions& mc = {});

}  // namespace bklab

#endif  // BKLAB_DUALITY_H_
