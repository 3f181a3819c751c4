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

#include "synthpop/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/special_functions/gamma.hpp>

#include "synthpop/common/error.hpp"

namespace synthpop::eval {

double ks_score(std::span<const double> real, std::span<const double> synth) {
  if (real.empty() || synth.empty()) throw InputError("ks_score needs two nonempty samples");
  std::vector<double> a(real.begin(), real.end());
  std::vector<double> b(synth.begin(), synth.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  // Step through the merged order; ties advance both sides before comparing.
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return 1.0 - d;
}

double chi_square_sf(double statistic, int df) {
  if (df < 1) throw InputError("chi-square needs df >= 1");
  if (!(statistic > 0.0)) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * statistic);
}

ChiSquareResult chi_square_test(std::span<const std::string> real, std::span<const std::string> synth) {
  if (real.empty() || synth.empty()) throw InputError("chi-square needs two nonempty samples");
  std::map<std::string, double> real_counts;
  std::map<std::string, double> synth_counts;
  for (const auto& c : real) real_counts[c] += 1.0;
  for (const auto& c : synth) synth_counts[c] += 1.0;

  const double n_real = static_cast<double>(real.size());
  const double n_synth = static_cast<double>(synth.size());
  std::map<std::string, std::pair<double, double>> cells;  // category -> (observed, expected)
  for (const auto& [c, k] : real_counts) cells[c] = {0.0, k / n_real * n_synth};

  ChiSquareResult r;
  std::size_t categories = real_counts.size();
  for (const auto& [c, k] : synth_counts) {
    if (auto it = cells.find(c); it != cells.end()) {
      it->second.first += k;
    } else {
      ++categories;
    }
  }
  if (categories < 2) throw InputError("chi-square needs at least two categories");
  // Synthetic-only categories have no expected mass; fold them into the
  // smallest real category (first in name order on ties).
  auto smallest = std::min_element(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
    return x.second.second < y.second.second;
  });
  for (const auto& [c, k] : synth_counts) {
    if (!real_counts.count(c)) {
      smallest->second.first += k;
      ++r.merged_categories;
    }
  }
  if (cells.size() < 2) {
    throw InputError("chi-square: the real sample has a single category, nothing to merge into");
  }
  for (const auto& [c, oe] : cells) {
    const double diff = oe.first - oe.second;
    r.statistic += diff * diff / oe.second;
  }
  r.df = static_cast<int>(cells.size()) - 1;
  r.p_value = chi_square_sf(r.statistic, r.df);
  return r;
}

double chi_square_pvalue(std::span<const std::string> real, std::span<const std::string> synth) {
  return chi_square_test(real, synth).p_value;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InputError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("quantile level must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::array<double, 3> quartiles(std::vector<double> values) {
  if (values.empty()) throw InputError("quartiles of an empty sample");
  std::sort(values.begin(), values.end());
  return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

}  // namespace synthpop::eval
