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
#include "bklab/json_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bklab {
namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument("config: " + what); }

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::vector<double> reals(const Json& j, const char* key) {
  const Json& a = need(j, key);
  if (!a.is_array()) bad(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) bad(std::string("'") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

double real(const Json& j, const char* key) {
  const Json& x = need(j, key);
  if (!x.is_number()) bad(std::string("'") + key + "' must be a number");
  return x.get<double>();
}

ItemSet set_of(const Json& a, int m) {
  if (!a.is_array()) bad("item set must be an array");
  ItemSet s = 0;
  for (const auto& x : a) {
    if (!x.is_number_integer()) bad("item ids must be integers");
    const int j = x.get<int>();
    if (j < 0 || j >= m) bad("item id out of range");
    s |= ItemSet{1} << j;
  }
  return s;
}

// %.17g keeps doubles round-trippable.
std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Distribution parse_distribution(const Json& j) {
  const Json& kind = need(j, "kind");
  if (!kind.is_string()) bad("'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "discrete") return DiscreteDist(reals(j, "values"), reals(j, "probs"));
  if (k == "uniform") return DiscreteDist::uniform(reals(j, "values"));
  if (k == "point") return DiscreteDist::point_mass(real(j, "value"));
  if (k == "erc") return EqualRevenueCapped{real(j, "k")};
  if (k == "ser") return ShiftedEqualRevenue{real(j, "k")};
  bad("unknown distribution kind '" + k + "'");
}

ProductDist parse_product(const Json& j) {
  if (j.is_object() && j.contains("iid")) {
    const Json& m = need(j, "m");
    if (!m.is_number_integer() || m.get<int>() < 1) bad("'m' must be a positive integer");
    return ProductDist::iid(parse_distribution(j.at("iid")), m.get<int>());
  }
  const Json& items = need(j, "items");
  if (!items.is_array() || items.empty()) bad("'items' must be a non-empty array");
  std::vector<Distribution> out;
  for (const auto& d : items) out.push_back(parse_distribution(d));
  return ProductDist(std::move(out));
}

SetSystem parse_constraint(const Json& j, int m) {
  const std::string k = need(j, "kind").get<std::string>();
  if (k == "full") return SetSystem::full(m);
  if (k == "uniform") return SetSystem::uniform(m, static_cast<int>(real(j, "k")));
  if (k == "partition") {
    std::vector<ItemSet> blocks;
    for (const auto& b : need(j, "blocks")) blocks.push_back(set_of(b, m));
    std::vector<int> caps;
    for (double c : reals(j, "caps")) caps.push_back(static_cast<int>(c));
    return SetSystem::partition(m, std::move(blocks), std::move(caps));
  }
  if (k == "explicit") {
    std::vector<ItemSet> sets;
    for (const auto& s : need(j, "sets")) sets.push_back(set_of(s, m));
    return SetSystem::explicit_family(m, sets);
  }
  bad("unknown constraint kind '" + k + "'");
}

std::vector<SetSystem> parse_constraints(const Json& j, int m) {
  std::vector<SetSystem> out;
  if (j.is_null()) return out;
  if (j.is_object()) {
    out.push_back(parse_constraint(j, m));
    return out;
  }
  if (!j.is_array()) bad("constraints must be an object or an array");
  for (const auto& c : j) out.push_back(parse_constraint(c, m));
  return out;
}

RegionMode parse_region_mode(const std::string& s) {
  if (s == "value") return RegionMode::kValue;
  if (s == "quantile") return RegionMode::kQuantile;
  bad("unknown region mode '" + s + "'");
}

Json to_json(const Estimate& e, std::uint64_t seed) {
  return Json{{"mean", e.mean},
              {"stderr", e.stderr_},
              {"samples", e.samples},
              {"method", e.method},
              {"seed", seed}};
}

Json to_json(const Outcome& o) {
  return Json{{"assignment", o.assignment},
              {"payments", o.payments},
              {"welfare", o.welfare},
              {"revenue", o.revenue()}};
}

Json to_json(const ReducedForm& rf, const TypeSpace& ts) {
  Json out = Json::object();
  for (std::size_t v = 0; v < ts.size(); ++v) {
    out[Json(ts.values(v)).dump()] = Json{{"pi", rf.pi[v]}, {"p", rf.p[v]}};
  }
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    bad("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string csv_header() { return "experiment,parameter,value,stderr,samples,seed,verdict"; }

std::string csv_line(const CsvRow& r) {
  return quote(r.experiment) + "," + quote(r.parameter) + "," + num(r.value) + "," +
         num(r.stderr_) + "," + std::to_string(r.samples) + "," + std::to_string(r.seed) + "," +
         r.verdict;
}

}  // namespace bklab
