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
#ifndef BKLAB_SUITES_H_
#define BKLAB_SUITES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bklab/dist.h"
#include "bklab/json_io.h"
#include "bklab/random.h"

namespace bklab {

enum class Verdict { kPass, kFail, kInfo };
const char* verdict_name(Verdict v);

struct Check {
  std::string name;
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  Verdict verdict = Verdict::kInfo;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  // INFO lines never fail a suite.
  bool passed() const;
  const Check* find(const std::string& name) const;
};

struct SuiteOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  int workers = 0;
};

const std::vector<std::string>& suite_names();

// params is the suite's object from configs/suites.json (missing keys take
// built-in defaults).  Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(const std::string& name, const Json& params,
                      const SuiteOverrides& over = {});

std::vector<CsvRow> to_csv_rows(const SuiteReport& r);
// "PASS classic-bk/spa-vs-myerson-n1 value=... detail"
std::string format_check(const SuiteReport& r, const Check& c);

// Regular discrete law on an integer grid, support size in [lo, hi].
DiscreteDist random_regular_dist(RandomStream& r, int lo, int hi);
ProductDist random_regular_product(RandomStream& r, int m, int lo, int hi);

// Optimal single-item revenue with n i.i.d. bidders, E[max(phi(v_(1)), 0)]
// with the discrete virtual value.  Throws std::domain_error for irregular
// laws.
double optimal_single_item_revenue(const DiscreteDist& d, int n);

// Expected revenue of myerson_single (second price, lazy monopoly reserve)
// and of plain second price, by enumerating all n-bidder profiles.
double myerson_mechanism_revenue(const DiscreteDist& d, int n);
double second_price_revenue(const DiscreteDist& d, int n);

// Exact expected revenue of SP-j over all (2n + 2m - 2)-tuples of F_j.
double sp_j_expected_revenue(const ProductDist& f, int j, int n);

}  // namespace bklab

#endif  // BKLAB_SUITES_H_
