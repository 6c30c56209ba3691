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
// One PASS/FAIL line per acceptance criterion.  Suite parameters come from
// configs/suites.json; a criterion fails when any of its checks fails or the
// suite overruns the time limit.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "bklab/json_io.h"
#include "bklab/suites.h"

namespace {

struct Criterion {
  int id;
  std::string suite;
  std::vector<std::string> checks;  // empty = every non-INFO check
  double limit_s;                   // 0 = none
  std::string what;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "classic-bk",
       {"spa-2-ge-myerson-1", "spa-3-ge-myerson-2", "spa-4-ge-myerson-3", "spa-two-paths"},
       5, "SPA(n+1) >= Myerson(n), 20 regular laws"},
      {2, "warmup-iid", {"sum-myerson-m-ge-opt"}, 30, "sum_j Myerson_m(j) >= LP OPT"},
      {3, "new-bound-single", {"quantile-bound-ge-opt"}, 60, "quantile bound >= LP OPT"},
      {4, "new-bound-single", {"spa-m-plus-1-ge-quantile-bound"}, 0,
       "sum_j SPA_{m+1}(j) >= quantile bound"},
      {5, "counterexample", {}, 120, "counterexample quantities"},
      {6, "additive-main", {"vcg-4-ge-opt-1"}, 120, "VCG with n+2m-2 extra >= LP OPT"},
      {7, "revj", {"rev-j-le-bound-n1", "rev-j-le-bound-n2", "spj-ge-bound-n1", "spj-ge-bound-n2"},
       120, "Rev_j <= bound <= SP-j revenue"},
      {8, "spj-claims", {"claim-max-fresh", "corr-under-hypotheses", "pos-corr", "dominance"}, 120,
       "claim and order-statistic lemmas"},
      {9, "downward", {}, 180, "downward-closed extra bidders"},
      {10, "matroid", {}, 0, "matroid extra bidders and rho"},
      {11, "asymmetric", {}, 0, "asymmetric constraints"},
      {12, "vcg-ud", {}, 0, "unit-demand VCG extra bidders"},
      {13, "duality-core", {}, 0, "flows, virtual values, weak duality"},
      {14, "lower-bound", {}, 120, "Omega(log m) lower bound"},
      {15, "large-market", {}, 0, "large-market half approximation"},
  };
  return c;
}

}  // namespace

int main() {
  using namespace bklab;
  const Json cfg = load_json_file(BKLAB_SOURCE_DIR "/configs/suites.json");
  std::map<std::string, SuiteReport> reports;
  for (const auto& c : criteria()) {
    if (reports.count(c.suite)) continue;
    SuiteReport rep = run_suite(c.suite, cfg.contains(c.suite) ? cfg.at(c.suite) : Json::object());
    for (const auto& ch : rep.checks) std::printf("  %s\n", format_check(rep, ch).c_str());
    std::fflush(stdout);
    reports.emplace(c.suite, std::move(rep));
  }

  int failed = 0;
  std::printf("\n");
  for (const auto& c : criteria()) {
    const SuiteReport& rep = reports.at(c.suite);
    bool ok = true;
    std::string why;
    if (c.checks.empty()) {
      for (const auto& ch : rep.checks)
        if (ch.verdict == Verdict::kFail) {
          ok = false;
          why += " " + ch.name;
        }
    } else {
      for (const auto& name : c.checks) {
        const Check* ch = rep.find(name);
        if (!ch || ch->verdict != Verdict::kPass) {
          ok = false;
          why += " " + name + (ch ? "" : "(missing)");
        }
      }
    }
    if (c.limit_s > 0 && rep.seconds > c.limit_s) {
      ok = false;
      why += " time";
    }
    failed += !ok;
    std::printf("%s criterion %d [%s] %s (%.1f s%s)%s%s\n", ok ? "PASS" : "FAIL", c.id,
                c.suite.c_str(), c.what.c_str(), rep.seconds,
                c.limit_s > 0 ? (" of " + std::to_string(static_cast<int>(c.limit_s))).c_str() : "",
                ok ? "" : " failing:", why.c_str());
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria().size()) - failed,
              criteria().size());
  return failed == 0 ? 0 : 1;
}
