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
#include <optional>
#include <string_view>

#include "synthpop/common/rng.hpp"
#include "synthpop/io/microdata.hpp"
#include "synthpop/ipu/binning.hpp"

namespace synthpop::attr {

// Attributes drawn for one synthetic person. Donor indices point into the
// training rows (the MicroSample persons used for fitting) and exist for
// tracing only.
struct AttributeDraw {
  std::optional<double> height;
  std::optional<double> weight;
  io::Comorbidities comorbidities{};
  std::size_t donor = 0;
  std::optional<std::size_t> height_donor;
  std::optional<std::size_t> weight_donor;
};

// Generates individual attributes conditioned on age and sex. Implementations
// must be immutable after fit() so sample() can run concurrently, each caller
// owning its Rng.
class ConditionalGenerator {
 public:
  virtual ~ConditionalGenerator() = default;
  virtual void fit(const io::MicroSample& sample) = 0;
  virtual AttributeDraw sample(int age, std::string_view sex, Rng& rng) const = 0;
};

}  // namespace synthpop::attr
