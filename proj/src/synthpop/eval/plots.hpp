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

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace synthpop::eval {

// Numeric columns by name; NaN marks a missing cell.
using NumericTable = std::map<std::string, std::vector<double>>;

struct PlotOptions {
  double bin_width = 5.0;
  std::size_t scatter_cap = 10000;
  std::uint64_t seed = 1;
};

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t real = 0;
  std::size_t synth = 0;
};

// Shared bins of the given width aligned to multiples of the width.
std::vector<HistogramBin> histogram(std::span<const double> real, std::span<const double> synth, double bin_width);

// Row indices of a seeded uniform subsample of size min(cap, n), ascending.
std::vector<std::size_t> subsample(std::size_t n, std::size_t cap, std::uint64_t seed);

// Writes `x,y` pairs of rows where both values are present, capped by a
// seeded subsample. Returns the number of rows written.
std::size_t write_scatter(std::span<const double> x, std::span<const double> y, const std::string& x_name,
                          const std::string& y_name, std::size_t cap, std::uint64_t seed,
                          const std::filesystem::path& path);

// Per column: histogram_<col>.csv, scatter_<a>_<b>.csv for every column pair
// and both sources (source,a,b), and summary.csv with quartiles. Throws
// InputError for a column missing from either table.
void export_plot_data(const NumericTable& real, const NumericTable& synth, std::span<const std::string> columns,
                      const std::filesystem::path& out_dir, const PlotOptions& options = {});

}  // namespace synthpop::eval
