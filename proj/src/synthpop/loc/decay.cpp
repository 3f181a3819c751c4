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

#include "synthpop/loc/decay.hpp"

#include <cmath>
#include <string>

#include "synthpop/common/error.hpp"

namespace synthpop::loc {

DecayForm parse_decay_form(std::string_view name) {
  if (name == "reciprocal") return DecayForm::kReciprocal;
  if (name == "exponential") return DecayForm::kExponential;
  if (name == "power") return DecayForm::kPower;
  throw InputError("unknown decay form '" + std::string(name) + "' (reciprocal, exponential, power)");
}

std::string_view decay_form_name(DecayForm form) {
  switch (form) {
    case DecayForm::kReciprocal:
      return "reciprocal";
    case DecayForm::kExponential:
      return "exponential";
    case DecayForm::kPower:
      return "power";
  }
  return "reciprocal";
}

double DecayFunction::operator()(double d) const {
  switch (form) {
    case DecayForm::kReciprocal:
      return 1.0 / std::max(d, d_min);
    case DecayForm::kExponential:
      return std::exp(-rate * d);
    case DecayForm::kPower:
      return std::pow(std::max(d, d_min), -exponent);
  }
  return 0.0;
}

void DecayFunction::validate() const {
  switch (form) {
    case DecayForm::kReciprocal:
      if (!(d_min > 0.0) || !std::isfinite(d_min)) throw InputError("decay d_min must be > 0");
      break;
    case DecayForm::kExponential:
      if (!(rate > 0.0) || !std::isfinite(rate)) throw InputError("decay rate must be > 0");
      break;
    case DecayForm::kPower:
      if (!(d_min > 0.0) || !std::isfinite(d_min)) throw InputError("decay d_min must be > 0");
      if (!(exponent > 0.0) || !std::isfinite(exponent)) throw InputError("decay exponent must be > 0");
      break;
  }
}

double l2_distance(LatLon a, LatLon b) { return std::hypot(a.lat - b.lat, a.lon - b.lon); }

}  // namespace synthpop::loc
