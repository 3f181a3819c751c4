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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace synthpop {

// Age groups given by ascending lower edges starting at 0; the last group is
// open ended ("85+").
class AgeBins {
 public:
  AgeBins();  // 0-4, 5-9, ..., 80-84, 85+
  explicit AgeBins(std::vector<int> lower_edges);

  std::size_t size() const { return edges_.size(); }
  std::size_t index(int age) const;
  std::string label(std::size_t index) const;
  std::string label_for(int age) const { return label(index(age)); }
  const std::vector<int>& edges() const { return edges_; }

 private:
  std::vector<int> edges_;
};

struct BinningConfig {
  AgeBins age_bins;
  // Households of this size or larger share the category "<cap>+".
  int household_size_cap = 7;

  std::string household_size_label(std::size_t size) const;
};

}  // namespace synthpop
