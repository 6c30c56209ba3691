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

#ifndef BKLAB_TYPESPACE_H_
#define BKLAB_TYPESPACE_H_

#include <cstddef>
#include <vector>

#include "bklab/dist.h"

namespace bklab {

// Finite product type space of a ProductDist of DiscreteDist items.  Types
// are indexed in mixed radix with item 0 as the least significant digit.
class TypeSpace {
 public:
  static constexpr std::size_t kMaxTypes = std::size_t{1} << 22;

  explicit TypeSpace(const ProductDist& f);

  std::size_t size() const { return size_; }
  int m() const { return static_cast<int>(items_.size()); }
  const DiscreteDist& item(int j) const { return items_[static_cast<std::size_t>(j)]; }

  std::size_t stride(int j) const { return stride_[static_cast<std::size_t>(j)]; }
  std::size_t digit(std::size_t idx, int j) const {
    return (idx / stride(j)) % item(j).size();
  }
  std::vector<std::size_t> digits(std::size_t idx) const;
  std::vector<double> values(std::size_t idx) const;
  double value(std::size_t idx, int j) const { return item(j).value(digit(idx, j)); }
  double prob(std::size_t idx) const;

 private:
  std::vector<DiscreteDist> items_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
};

}  // namespace bklab

#endif  // BKLAB_TYPESPACE_H_
