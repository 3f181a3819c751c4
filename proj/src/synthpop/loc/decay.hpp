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

#include <string_view>

#include "synthpop/io/geometry.hpp"

namespace synthpop::loc {

enum class DecayForm { kReciprocal, kExponential, kPower };

DecayForm parse_decay_form(std::string_view name);
std::string_view decay_form_name(DecayForm form);

// Distance-decay weight f(d), d in degrees. reciprocal: 1/max(d, d_min);
// exponential: exp(-rate d); power: max(d, d_min)^-exponent. The floor keeps
// f finite at d = 0.
struct DecayFunction {
  DecayForm form = DecayForm::kReciprocal;
  double d_min = 1e-4;
  double rate = 100.0;
  double exponent = 1.0;

  double operator()(double d) const;
  // Throws InputError for parameters that would break positivity or
  // monotonicity.
  void validate() const;
};

double l2_distance(LatLon a, LatLon b);

}  // namespace synthpop::loc
