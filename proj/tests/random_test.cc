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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace bklab {
namespace {

// Reference outputs of the 20-round Threefry-2x32 block function, taken from
// an independent implementation (jax.random's threefry_2x32).
TEST(Threefry, KnownAnswers) {
  auto a = threefry2x32({0u, 0u}, {0u, 0u});
  EXPECT_EQ(a[0], 0x6b200159u);
  EXPECT_EQ(a[1], 0x99ba4efeu);
  auto b = threefry2x32({0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(b[0], 0x1cb996fcu);
  EXPECT_EQ(b[1], 0xbb002be7u);
  auto c = threefry2x32({0x13198a2eu, 0x03707344u}, {0x243f6a88u, 0x85a308d3u});
  EXPECT_EQ(c[0], 0xc4923a9cu);
  EXPECT_EQ(c[1], 0x483df7a0u);
}

TEST(RandomStream, SameSeedSameSequence) {
  RandomStream a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStream, StreamsDiffer) {
  RandomStream a(42, 7), b(42, 8), c(43, 7);
  int same_b = 0, same_c = 0;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u64();
    same_b += x == b.next_u64();
    same_c += x == c.next_u64();
  }
  EXPECT_EQ(same_b, 0);
  EXPECT_EQ(same_c, 0);
}

TEST(RandomStream, UniformOpenIntervalAndMoments) {
  RandomStream r(1, 0);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform01();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  // Mean 1/2 with sd sqrt(1/12/n) ~ 6.5e-4; 5 sigma.
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
  EXPECT_NEAR(s2 / n, 1.0 / 3.0, 5e-3);
}

TEST(RandomStream, BelowIsRoughlyUniform) {
  RandomStream r(9, 3);
  std::vector<int> hist(6, 0);
  const int n = 60000;
  for (int i = 0; i < n; ++i) ++hist[r.below(6)];
  for (int h : hist) EXPECT_NEAR(h, n / 6, 5 * std::sqrt(n / 6.0));
  EXPECT_THROW(r.below(0), std::invalid_argument);
}

}  // namespace
}  // namespace bklab
