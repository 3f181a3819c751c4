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

#include "synthpop/eval/plots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/eval/metrics.hpp"

namespace synthpop::eval {

namespace fs = std::filesystem;

namespace {

std::vector<double> present(std::span<const double> v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (!std::isnan(x)) out.push_back(x);
  }
  return out;
}

const std::vector<double>& column(const NumericTable& t, const std::string& name, const char* which) {
  const auto it = t.find(name);
  if (it == t.end()) throw InputError(std::string("unknown column '") + name + "' in the " + which + " data");
  return it->second;
}

}  // namespace

std::vector<HistogramBin> histogram(std::span<const double> real, std::span<const double> synth, double bin_width) {
  if (!(bin_width > 0.0)) throw InputError("histogram bin width must be > 0");
  const auto r = present(real);
  const auto s = present(synth);
  if (r.empty() && s.empty()) return {};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto* v : {&r, &s}) {
    for (double x : *v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const double first = std::floor(lo / bin_width);
  const auto n_bins = static_cast<std::size_t>(std::floor(hi / bin_width) - first) + 1;
  if (n_bins > 1'000'000) throw InputError("histogram would need more than 10^6 bins; raise the bin width");
  std::vector<HistogramBin> bins(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    bins[k].lower = (first + static_cast<double>(k)) * bin_width;
    bins[k].upper = bins[k].lower + bin_width;
  }
  auto slot = [&](double x) {
    const auto k = static_cast<std::size_t>(std::floor(x / bin_width) - first);
    return std::min(k, n_bins - 1);
  };
  for (double x : r) ++bins[slot(x)].real;
  for (double x : s) ++bins[slot(x)].synth;
  return bins;
}

std::vector<std::size_t> subsample(std::size_t n, std::size_t cap, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n <= cap) return idx;
  Rng rng = make_rng(seed, Stream::kEvalScatter, n);
  // Partial Fisher-Yates: the first cap slots become a uniform subset.
  for (std::size_t i = 0; i < cap; ++i) {
    const auto j = i + uniform_index(rng, n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  return idx;
}

namespace {

std::vector<std::size_t> complete_rows(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("scatter columns differ in length");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isnan(x[i]) && !std::isnan(y[i])) rows.push_back(i);
  }
  return rows;
}

}  // namespace

std::size_t write_scatter(std::span<const double> x, std::span<const double> y, const std::string& x_name,
                          const std::string& y_name, std::size_t cap, std::uint64_t seed, const fs::path& path) {
  const auto rows = complete_rows(x, y);
  CsvWriter out(path);
  out.write_row({x_name, y_name});
  std::string line;
  const auto pick = subsample(rows.size(), cap, seed);
  for (const auto k : pick) {
    line.clear();
    append_double(line, x[rows[k]]);
    line += ',';
    append_double(line, y[rows[k]]);
    out.write_line(line);
  }
  out.close();
  return pick.size();
}

void export_plot_data(const NumericTable& real, const NumericTable& synth, std::span<const std::string> columns,
                      const fs::path& out_dir, const PlotOptions& options) {
  for (const auto& c : columns) {
    column(real, c, "real");
    column(synth, c, "synthetic");
  }
  fs::create_directories(out_dir);

  CsvWriter summary(out_dir / "summary.csv");
  summary.write_row({"column", "source", "count", "min", "q1", "median", "q3", "max", "mean"});
  for (const auto& c : columns) {
    const auto& r = column(real, c, "real");
    const auto& s = column(synth, c, "synthetic");

    CsvWriter hist(out_dir / ("histogram_" + c + ".csv"));
    hist.write_row({"bin_lower", "bin_upper", "real_count", "synth_count"});
    for (const auto& b : histogram(r, s, options.bin_width)) {
      hist.write_row({format_double(b.lower), format_double(b.upper), std::to_string(b.real), std::to_string(b.synth)});
    }
    hist.close();

    for (const auto& [source, values] : {std::pair{"real", &r}, std::pair{"synth", &s}}) {
      const auto v = present(*values);
      if (v.empty()) {
        summary.write_row({c, source, "0", "", "", "", "", "", ""});
        continue;
      }
      const auto q = quartiles(v);
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      summary.write_row({c, source, std::to_string(v.size()), format_double(*mn), format_double(q[0]),
                         format_double(q[1]), format_double(q[2]), format_double(*mx), format_double(mean)});
    }
  }
  summary.close();

  for (std::size_t a = 0; a < columns.size(); ++a) {
    for (std::size_t b = a + 1; b < columns.size(); ++b) {
      const auto& ca = columns[a];
      const auto& cb = columns[b];
      CsvWriter out(out_dir / ("scatter_" + ca + "_" + cb + ".csv"));
      out.write_row({"source", ca, cb});
      std::string line;
      for (const auto& [source, table] : {std::pair{"real", &real}, std::pair{"synth", &synth}}) {
        const auto& x = table->at(ca);
        const auto& y = table->at(cb);
        const auto rows = complete_rows(x, y);
        for (const auto k : subsample(rows.size(), options.scatter_cap, options.seed)) {
          line = source;
          line += ',';
          append_double(line, x[rows[k]]);
          line += ',';
          append_double(line, y[rows[k]]);
          out.write_line(line);
        }
      }
      out.close();
    }
  }
}

}  // namespace synthpop::eval
