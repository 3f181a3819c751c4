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

#include <array>
#include <span>
#include <string>
#include <vector>

namespace synthpop::eval {

// 1 - D, where D is the largest gap between the two empirical CDFs.
// Throws InputError if either sample is empty.
double ks_score(std::span<const double> real, std::span<const double> synth);

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::size_t merged_categories = 0;  // synthetic-only categories folded away
};

// Goodness of fit of the synthetic category counts against expected counts
// taken from the real proportions scaled to the synthetic size. A category
// absent from the real sample (expected count 0) is merged into the real
// category with the smallest nonzero expected count. Needs at least two
// categories after merging.
ChiSquareResult chi_square_test(std::span<const std::string> real, std::span<const std::string> synth);
double chi_square_pvalue(std::span<const std::string> real, std::span<const std::string> synth);

// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, int df);

// Linear interpolation between order statistics at h = (n - 1) p.
double quantile(std::vector<double> values, double p);
std::array<double, 3> quartiles(std::vector<double> values);

}  // namespace synthpop::eval
