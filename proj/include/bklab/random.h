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

#ifndef BKLAB_RANDOM_H_
#define BKLAB_RANDOM_H_

#include <array>
#include <cstdint>

namespace bklab {

// Threefry-2x32 with 20 rounds (Salmon et al., Random123).
std::array<std::uint32_t, 2> threefry2x32(std::array<std::uint32_t, 2> key,
                                          std::array<std::uint32_t, 2> ctr);

// Counter-based stream.  Word t of stream (seed, index) is a pure function of
// (seed, index, t), so Monte Carlo sample i can own stream i and results do
// not depend on how samples are split across threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  // Uniform on the open interval (0,1).
  double uniform01();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bklab

#endif  // BKLAB_RANDOM_H_
