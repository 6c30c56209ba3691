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
#ifndef BKLAB_JSON_IO_H_
#define BKLAB_JSON_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "bklab/dist.h"
#include "bklab/duality.h"
#include "bklab/estimate.h"
#include "bklab/mech.h"
#include "bklab/optrev.h"
#include "bklab/setsys.h"
#include "bklab/stoch.h"
#include "json.hpp"

namespace bklab {

using Json = nlohmann::json;

// Descriptor errors are reported as std::invalid_argument with the offending
// key in the message.
//
//   {"kind": "discrete", "values": [...], "probs": [...]}
//   {"kind": "uniform", "values": [...]}
//   {"kind": "point", "value": x}
//   {"kind": "erc", "k": k}          equal revenue capped at k
//   {"kind": "ser", "k": k}          shifted equal revenue
Distribution parse_distribution(const Json& j);

// {"items": [dist, ...]} or {"iid": dist, "m": m}
ProductDist parse_product(const Json& j);

//   {"kind": "full"} | {"kind": "uniform", "k": k}
//   {"kind": "partition", "blocks": [[0, 1], [2]], "caps": [1, 1]}
//   {"kind": "explicit", "sets": [[], [0], [1], [0, 1]]}
SetSystem parse_constraint(const Json& j, int m);
std::vector<SetSystem> parse_constraints(const Json& j, int m);

RegionMode parse_region_mode(const std::string& s);

Json to_json(const Estimate& e, std::uint64_t seed);
Json to_json(const Outcome& o);
// Keyed by the type vector, e.g. "[1,3]".
Json to_json(const ReducedForm& rf, const TypeSpace& ts);

// Reads a whole file; std::invalid_argument when it is missing or malformed.
Json load_json_file(const std::string& path);

// CSV with the fixed header experiment,parameter,value,stderr,samples,seed,verdict.
struct CsvRow {
  std::string experiment;
  std::string parameter;
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string verdict;
};

std::string csv_header();
std::string csv_line(const CsvRow& r);

}  // namespace bklab

#endif  // BKLAB_JSON_IO_H_
