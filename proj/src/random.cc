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

#include "bklab/random.h"

#include <stdexcept>

namespace bklab {
namespace {

constexpr std::uint32_t kParity = 0x1BD11BDA;
constexpr int kRot[8] = {13, 15, 26, 6, 17, 29, 16, 24};

inline std::uint32_t rotl(std::uint32_t x, int r) {
  return (x << r) | (x >> (32 - r));
}

}  // namespace

std::array<std::uint32_t, 2> threefry2x32(std::array<std::uint32_t, 2> key,
                                          std::array<std::uint32_t, 2> ctr) {
  const std::uint32_t ks[3] = {key[0], key[1], kParity ^ key[0] ^ key[1]};
  std::uint32_t x0 = ctr[0] + ks[0];
  std::uint32_t x1 = ctr[1] + ks[1];
  for (int r = 0; r < 20; ++r) {
    x0 += x1;
    x1 = rotl(x1, kRot[r % 8]);
    x1 ^= x0;
    if (r % 4 == 3) {
      const int s = r / 4 + 1;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + static_cast<std::uint32_t>(s);
    }
  }
  return {x0, x1};
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index) {
  // Derive a per-stream key from the seed key, the way key splitting does.
  const std::array<std::uint32_t, 2> root = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  key_ = threefry2x32(root, {static_cast<std::uint32_t>(index),
                             static_cast<std::uint32_t>(index >> 32)});
}

std::uint64_t RandomStream::next_u64() {
  const auto out = threefry2x32(
      key_, {static_cast<std::uint32_t>(counter_),
             static_cast<std::uint32_t>(counter_ >> 32)});
  ++counter_;
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

double RandomStream::uniform01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below: empty range");
  // Lemire-style rejection keeps the draw unbiased.
  const std::uint64_t limit = (0 - n) % n;
  while (true) {
    const std::uint64_t x = next_u64();
    const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    if (static_cast<std::uint64_t>(m) >= limit) {
      return static_cast<std::uint64_t>(m >> 64);
    }
  }
}

}  // namespace bklab
