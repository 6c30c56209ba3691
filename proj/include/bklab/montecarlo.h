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

#ifndef BKLAB_MONTECARLO_H_
#define BKLAB_MONTECARLO_H_

#include <functional>
#include <span>
#include <vector>

#include "bklab/dist.h"
#include "bklab/estimate.h"
#include "bklab/random.h"

namespace bklab {

// Sample i draws from RandomStream(mc.seed, i).  Samples are reduced in
// fixed blocks, in block order, so the result is bit-identical for any
// worker count.
using SampleFn = std::function<void(RandomStream&, std::span<double>)>;
std::vector<Estimate> monte_carlo(int outputs, const SampleFn& fn, const McOptions& mc);

Estimate monte_carlo_scalar(const std::function<double(RandomStream&)>& fn,
                            const McOptions& mc);

// Draw with unbounded families capped at quantile(1 - tail_mass).
double sample_capped(const Distribution& d, RandomStream& rng,
                     double tail_mass = kDefaultTailMass);

int resolve_workers(int requested);

}  // namespace bklab

#endif  // BKLAB_MONTECARLO_H_
