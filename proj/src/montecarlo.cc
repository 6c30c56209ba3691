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

#include "bklab/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace bklab {
namespace {

constexpr std::uint64_t kBlock = 4096;

// Running mean and centered second moment (Chan et al. merge).
struct Moments {
  double n = 0, mean = 0, m2 = 0;

  void add(double x) {
    n += 1;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double tot = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * n * o.n / tot;
    n = tot;
  }
};

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

std::vector<Estimate> monte_carlo(int outputs, const SampleFn& fn, const McOptions& mc) {
  if (outputs < 1) throw std::invalid_argument("monte_carlo: need at least one output");
  if (mc.samples < 2) throw std::invalid_argument("monte_carlo: need at least 2 samples");
  const std::uint64_t blocks = (mc.samples + kBlock - 1) / kBlock;
  std::vector<std::vector<Moments>> per_block(blocks, std::vector<Moments>(outputs));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto worker = [&]() {
    std::vector<double> out(static_cast<std::size_t>(outputs));
    try {
      for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) {
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(mc.samples, lo + kBlock);
        auto& acc = per_block[b];
        for (std::uint64_t i = lo; i < hi; ++i) {
          RandomStream rng(mc.seed, i);
          std::fill(out.begin(), out.end(), 0.0);
          fn(rng, out);
          for (int k = 0; k < outputs; ++k) acc[k].add(out[k]);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!error) error = std::current_exception();
      next.store(blocks);
    }
  };

  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(resolve_workers(mc.workers)), blocks));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<Estimate> est(static_cast<std::size_t>(outputs));
  for (int k = 0; k < outputs; ++k) {
    Moments tot;
    for (const auto& blk : per_block) tot.merge(blk[k]);
    est[k].mean = tot.mean;
    est[k].stderr_ = std::sqrt(tot.m2 / (tot.n - 1) / tot.n);
    est[k].samples = mc.samples;
    est[k].method = "mc";
  }
  return est;
}

Estimate monte_carlo_scalar(const std::function<double(RandomStream&)>& fn,
                            const McOptions& mc) {
  return monte_carlo(
      1, [&](RandomStream& r, std::span<double> out) { out[0] = fn(r); }, mc)[0];
}

double sample_capped(const Distribution& d, RandomStream& rng, double tail_mass) {
  const double u = rng.uniform01();
  if (d.bounded()) return d.quantile(u);
  return d.quantile(std::min(u, 1.0 - tail_mass));
}

}  // namespace bklab
