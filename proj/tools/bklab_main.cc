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
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bklab/dist.h"
#include "bklab/duality.h"
#include "bklab/json_io.h"
#include "bklab/mech.h"
#include "bklab/montecarlo.h"
#include "bklab/optrev.h"
#include "bklab/stoch.h"
#include "bklab/suites.h"
#include "bklab/typespace.h"

namespace bklab {
namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--seed", c.seed, "RNG seed (overrides BKLAB_SEED and the config)");
  cmd->add_option("--samples", c.samples, "Monte Carlo samples");
  cmd->add_option("--out", c.out, "write CSV/JSON here instead of stdout");
  cmd->add_option("--workers", c.workers, "Monte Carlo threads, 0 = all cores");
}

Json config_of(const Common& c, bool required) {
  if (c.config.empty()) {
    if (required) throw std::invalid_argument("config: --config is required");
    return Json::object();
  }
  Json j = load_json_file(c.config);
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  return j;
}

// --seed, then BKLAB_SEED, then the config, then 1.
std::uint64_t seed_of(const Common& c, const Json& cfg) {
  if (c.seed) return *c.seed;
  if (const char* env = std::getenv("BKLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("BKLAB_SEED is not an integer");
    }
  }
  return cfg.value("seed", std::uint64_t{1});
}

McOptions mc_of(const Common& c, const Json& cfg) {
  McOptions mc;
  mc.seed = seed_of(c, cfg);
  mc.samples = c.samples ? *c.samples : cfg.value("samples", mc.samples);
  mc.workers = c.workers;
  return mc;
}

class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
  os << csv_header() << "\n";
  for (const auto& r : rows) os << csv_line(r) << "\n";
}

CsvRow row(const std::string& exp, const std::string& param, const Estimate& e, std::uint64_t seed,
           const std::string& verdict = "INFO") {
  return {exp, param, e.mean, e.stderr_, e.samples, seed, verdict};
}

int cmd_bound(const Common& c) {
  const Json cfg = config_of(c, true);
  const ProductDist f = parse_product(cfg.at("product"));
  const int n = cfg.value("n", 1);
  const McOptions mc = mc_of(c, cfg);
  std::vector<CsvRow> rows;
  for (RegionMode mode : {RegionMode::kValue, RegionMode::kQuantile}) {
    const std::string tag = region_mode_name(mode);
    rows.push_back(row("bound", "single-" + tag, single_bidder_bound(f, mode, mc), mc.seed));
    rows.push_back(row("bound", "multi-" + tag + "-n" + std::to_string(n),
                       multi_bidder_bound(f, n, mode, mc), mc.seed));
  }
  Sink sink(c.out);
  emit_csv(sink.os(), rows);
  return 0;
}

int cmd_verify(const Common& c, const std::string& suite) {
  const Json cfg = config_of(c, false);
  std::vector<std::string> names;
  if (suite == "all") names = suite_names();
  else names.push_back(suite);
  SuiteOverrides over;
  over.seed = c.seed;
  if (!over.seed && std::getenv("BKLAB_SEED")) over.seed = seed_of(c, Json::object());
  over.samples = c.samples;
  over.workers = c.workers;
  bool ok = true;
  std::vector<CsvRow> rows;
  for (const auto& name : names) {
    const Json params = cfg.contains(name) ? cfg.at(name) : Json::object();
    const SuiteReport rep = run_suite(name, params, over);
    for (const auto& ch : rep.checks) std::cout << format_check(rep, ch) << "\n";
    std::cout << (rep.passed() ? "PASS " : "FAIL ") << name << " ("
              << rep.seconds << " s)\n";
    ok = ok && rep.passed();
    auto r = to_csv_rows(rep);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (!c.out.empty()) {
    Sink sink(c.out);
    emit_csv(sink.os(), rows);
  }
  return ok ? 0 : kExitFail;
}

Estimate benchmark_of(const Json& b, const ProductDist& f, int n, const McOptions& mc) {
  if (b.is_number()) return Estimate::exact(b.get<double>());
  const std::string k = b.get<std::string>();
  if (k == "lp") {
    if (n != 1) throw std::invalid_argument("config: the lp benchmark needs n = 1");
    return Estimate::exact(opt_rev_single(f).revenue);
  }
  if (k == "myerson" || k == "optimal") {
    if (f.m() != 1 || !f.items[0].is_discrete())
      throw std::invalid_argument("config: the " + k + " benchmark needs one discrete item");
    const auto& d = f.items[0].discrete();
    return Estimate::exact(k == "myerson" ? myerson_mechanism_revenue(d, n)
                                          : optimal_single_item_revenue(d, n));
  }
  if (k == "bound-value") return multi_bidder_bound(f, n, RegionMode::kValue, mc);
  if (k == "bound-quantile") return multi_bidder_bound(f, n, RegionMode::kQuantile, mc);
  throw std::invalid_argument("config: unknown benchmark '" + k + "'");
}

int cmd_cc_search(const Common& c) {
  const Json cfg = config_of(c, true);
  const ProductDist f = parse_product(cfg.at("product"));
  VcgSpec spec;
  spec.n = cfg.value("n", 1);
  spec.kind = parse_vcg_kind(cfg.value("kind", std::string("additive")));
  spec.constraints = parse_constraints(cfg.value("constraints", Json()), f.m());
  const int c_max = cfg.value("c_max", 10);
  const McOptions mc = mc_of(c, cfg);
  const Estimate bench = benchmark_of(cfg.value("benchmark", Json(0.0)), f, spec.n, mc);
  const CcResult res = cc_search(f, spec, bench, c_max, mc);

  std::vector<CsvRow> rows;
  rows.push_back(row("cc-search", "benchmark", bench, mc.seed));
  for (const auto& s : res.steps) {
    rows.push_back(row("cc-search", "c=" + std::to_string(s.c), s.revenue, mc.seed,
                       s.pass ? "PASS" : "FAIL"));
  }
  rows.push_back({"cc-search", "c_min", res.c ? static_cast<double>(*res.c) : -1.0, 0.0, 0,
                  mc.seed, res.c ? "FOUND" : "NONE"});
  if (spec.kind == VcgKind::kAdditive) {
    rows.push_back({"cc-search", "claimed-bound-n+2m-2",
                    static_cast<double>(spec.n + 2 * f.m() - 2), 0.0, 0, mc.seed, "INFO"});
  }
  Sink sink(c.out);
  emit_csv(sink.os(), rows);
  return 0;
}

Outcome run_mechanism(const std::string& mech, const ValueMatrix& v,
                      const std::vector<SetSystem>& cons, const ProductDist& f) {
  if (mech == "vcg-additive") return vcg_additive(Profile::additive(v));
  if (mech == "vcg-ud") return vcg_ud(Profile::additive(v));
  if (mech == "vcg-constrained") {
    std::vector<SetSystem> per;
    for (std::size_t i = 0; i < v.size(); ++i)
      per.push_back(cons.empty() ? SetSystem::full(f.m()) : cons[i % cons.size()]);
    return vcg_constrained(Profile(v, per));
  }
  if (mech == "myerson" || mech == "spa") {
    if (f.m() != 1) throw std::invalid_argument("config: single-item mechanism needs m = 1");
    std::vector<double> bids;
    for (const auto& r : v) bids.push_back(r.at(0));
    if (mech == "myerson") return myerson_single(bids, f.items[0]);
    return spa_lazy(bids, std::vector<double>(bids.size(), 0.0));
  }
  throw std::invalid_argument("config: unknown mechanism '" + mech + "'");
}

int cmd_simulate(const Common& c) {
  const Json cfg = config_of(c, true);
  const ProductDist f = parse_product(cfg.at("product"));
  const std::string mech = cfg.value("mechanism", std::string("vcg-additive"));
  const auto cons = parse_constraints(cfg.value("constraints", Json()), f.m());
  std::vector<ValueMatrix> profiles;
  if (cfg.contains("profile")) {
    profiles.push_back(cfg.at("profile").get<ValueMatrix>());
  } else {
    const int n = cfg.value("n", 2);
    const McOptions mc = mc_of(c, cfg);
    const int draws = cfg.value("draws", 1);
    for (int s = 0; s < draws; ++s) {
      RandomStream rng(mc.seed, static_cast<std::uint64_t>(s));
      ValueMatrix v(n, std::vector<double>(f.m()));
      for (auto& r : v)
        for (int j = 0; j < f.m(); ++j) r[j] = sample_capped(f.items[j], rng);
      profiles.push_back(v);
    }
  }
  Json out = Json::array();
  for (const auto& v : profiles) {
    if (v.empty()) throw std::invalid_argument("config: empty profile");
    for (const auto& r : v)
      if (static_cast<int>(r.size()) != f.m())
        throw std::invalid_argument("config: profile width must equal m");
    out.push_back(Json{{"values", v}, {"outcome", to_json(run_mechanism(mech, v, cons, f))}});
  }
  Sink sink(c.out);
  sink.os() << out.dump(2) << "\n";
  return 0;
}

int cmd_opt(const Common& c) {
  const Json cfg = config_of(c, true);
  const ProductDist f = parse_product(cfg.at("product"));
  const OptRevResult res = opt_rev_single(f);
  const TypeSpace ts(f);
  Json out{{"opt_revenue", res.revenue},
           {"bic_rows", res.rows},
           {"reduced_form", to_json(res.rf, ts)}};
  Sink sink(c.out);
  sink.os() << out.dump(2) << "\n";
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"bklab: competition-complexity laboratory"};
  app.require_subcommand(1);
  Common common;
  std::string suite;
  auto* bound = app.add_subcommand("bound", "duality upper bounds for a product prior");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* cc = app.add_subcommand("cc-search", "smallest number of extra bidders");
  auto* sim = app.add_subcommand("simulate", "run a mechanism on given or sampled profiles");
  auto* opt = app.add_subcommand("opt", "optimal single-bidder revenue by LP");
  for (auto* cmd : {bound, verify, cc, sim, opt}) add_common(cmd, common);
  verify->add_option("suite", suite, "suite name or 'all'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  try {
    if (*bound) return cmd_bound(common);
    if (*verify) return cmd_verify(common, suite);
    if (*cc) return cmd_cc_search(common);
    if (*sim) return cmd_simulate(common);
    if (*opt) return cmd_opt(common);
  } catch (const Json::exception& e) {
    std::cerr << "bklab: config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "bklab: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace bklab

int main(int argc, char** argv) { return bklab::run(argc, argv); }
