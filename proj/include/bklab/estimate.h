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

#ifndef BKLAB_ESTIMATE_H_
#define BKLAB_ESTIMATE_H_

#include <cstdint>
#include <string>

namespace bklab {

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::string method = "exact";  // "exact" or "mc"

  static Estimate exact(double v) { return {v, 0.0, 0, "exact"}; }
  bool is_exact() const { return method == "exact"; }
};

// Monte Carlo defaults.  workers == 0 means hardware concurrency.
struct McOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
};

// Guard band used by every Monte Carlo inequality check.
inline constexpr double kGuardSigmas = 4.0;

}  // namespace bklab

#endif  // BKLAB_ESTIMATE_H_
