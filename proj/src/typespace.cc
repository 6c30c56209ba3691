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

#include "bklab/typespace.h"

#include <stdexcept>

namespace bklab {

TypeSpace::TypeSpace(const ProductDist& f) {
  for (const auto& d : f.items) {
    if (!d.is_discrete()) {
      throw std::invalid_argument("TypeSpace: every item must be discrete");
    }
    items_.push_back(d.discrete());
    stride_.push_back(size_);
    size_ *= d.discrete().size();
    if (size_ > kMaxTypes) throw std::length_error("TypeSpace: too many types");
  }
}

std::vector<std::size_t> TypeSpace::digits(std::size_t idx) const {
  std::vector<std::size_t> out(items_.size());
  for (std::size_t j = 0; j < items_.size(); ++j) {
    out[j] = idx % items_[j].size();
    idx /= items_[j].size();
  }
  return out;
}

std::vector<double> TypeSpace::values(std::size_t idx) const {
  std::vector<double> out(items_.size());
  for (std::size_t j = 0; j < items_.size(); ++j) {
    out[j] = items_[j].value(idx % items_[j].size());
    idx /= items_[j].size();
  }
  return out;
}

double TypeSpace::prob(std::size_t idx) const {
  double p = 1.0;
  for (const auto& d : items_) {
    p *= d.prob(idx % d.size());
    idx /= d.size();
  }
  return p;
}

}  // namespace bklab
