// Copyright 2026 The synthpop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synthpop/ipu/binning.hpp"

#include <algorithm>

#include "synthpop/common/error.hpp"

namespace synthpop {

AgeBins::AgeBins() {
  for (int a = 0; a <= 85; a += 5) edges_.push_back(a);
}

AgeBins::AgeBins(std::vector<int> lower_edges) : edges_(std::move(lower_edges)) {
  if (edges_.empty() || edges_.front() != 0) throw InputError("age bins must start at 0");
  if (!std::is_sorted(edges_.begin(), edges_.end()) ||
      std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw InputError("age bin edges must be strictly increasing");
  }
}

std::size_t AgeBins::index(int age) const {
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), age);
  return it == edges_.begin() ? 0 : static_cast<std::size_t>(it - edges_.begin()) - 1;
}

std::string AgeBins::label(std::size_t i) const {
  if (i + 1 >= edges_.size()) return std::to_string(edges_.back()) + "+";
  return std::to_string(edges_[i]) + "-" + std::to_string(edges_[i + 1] - 1);
}

std::string BinningConfig::household_size_label(std::size_t size) const {
  if (household_size_cap > 0 && size >= static_cast<std::size_t>(household_size_cap)) {
    return std::to_string(household_size_cap) + "+";
  }
  return std::to_string(size);
}

}  // namespace synthpop
