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

#include "synthpop/ipu/ipu_fit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::ipu {

namespace {

double weighted_count(const std::vector<std::pair<std::uint32_t, double>>& row, std::span<const double> w) {
  double s = 0.0;
  for (const auto& [j, a] : row) s += w[j] * a;
  return s;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

}  // namespace

std::vector<double> relative_deviations(const IncidenceMatrix& inc, std::span<const double> targets,
                                        std::span<const double> w) {
  std::vector<double> dev(inc.rows.size());
  for (std::size_t i = 0; i < inc.rows.size(); ++i) {
    dev[i] = std::fabs(weighted_count(inc.rows[i], w) - targets[i]) / targets[i];
  }
  return dev;
}

WeightVector ipu_fit(const IncidenceMatrix& inc, std::span<const double> targets, const IpuOptions& options) {
  if (targets.size() != inc.rows.size()) throw PipelineError("target count does not match constraint count");
  if (inc.households == 0) throw PipelineError("no households to weight");
  for (std::size_t i = 0; i < inc.rows.size(); ++i) {
    const auto& c = inc.constraints[i];
    if (!(targets[i] > 0.0) || !std::isfinite(targets[i])) {
      throw PipelineError("constraint " + c.attribute + " = '" + c.category + "' needs a positive target");
    }
    if (inc.rows[i].empty()) {
      throw PipelineError("infeasible constraint " + c.attribute + " = '" + c.category + "': zero incidence");
    }
  }

  std::vector<double> w(inc.households, 1.0);
  {
    double weighted = 0.0;
    double wanted = 0.0;
    for (std::size_t i = 0; i < inc.rows.size(); ++i) {
      weighted += weighted_count(inc.rows[i], w);
      wanted += targets[i];
    }
    if (weighted > 0.0 && !inc.rows.empty()) {
      const double scale = wanted / weighted;
      for (auto& x : w) x *= scale;
    }
  }

  WeightVector best;
  auto dev = relative_deviations(inc, targets, w);
  best.w = w;
  best.fit_delta = mean(dev);
  if (max_of(dev) <= options.tol) {
    best.converged = true;
    return best;
  }

  for (int epoch = 1; epoch <= options.max_iter; ++epoch) {
    for (std::size_t i = 0; i < inc.rows.size(); ++i) {
      const double s = weighted_count(inc.rows[i], w);
      if (!(s > 0.0)) {
        const auto& c = inc.constraints[i];
        throw PipelineError("constraint " + c.attribute + " = '" + c.category + "' lost all weight (infeasible)");
      }
      const double factor = targets[i] / s;
      for (const auto& [j, a] : inc.rows[i]) w[j] *= factor;
    }
    for (double x : w) {
      if (!std::isfinite(x)) throw PipelineError("household weight overflowed at epoch " + std::to_string(epoch));
    }
    dev = relative_deviations(inc, targets, w);
    if (options.on_epoch) options.on_epoch(epoch, dev);
    const double delta = mean(dev);
    best.iterations_used = epoch;
    if (delta < best.fit_delta) {
      best.fit_delta = delta;
      best.w = w;
    }
    if (max_of(dev) <= options.tol) {
      best.w = w;
      best.fit_delta = delta;
      best.converged = true;
      break;
    }
  }
  return best;
}

IpuDiagnosticsWriter::IpuDiagnosticsWriter(const std::filesystem::path& path, const IncidenceMatrix& inc)
    : out_(std::make_shared<std::ofstream>(path, std::ios::binary | std::ios::trunc)), inc_(&inc) {
  if (!*out_) throw PipelineError("cannot open '" + path.string() + "' for writing");
  *out_ << "epoch,constraint,attribute,category,deviation\n";
}

void IpuDiagnosticsWriter::operator()(int epoch, std::span<const double> deviations) {
  std::string line;
  for (std::size_t i = 0; i < deviations.size(); ++i) {
    line.clear();
    append_int(line, epoch);
    line.push_back(',');
    append_int(line, i);
    line.push_back(',');
    append_csv_field(line, inc_->constraints[i].attribute);
    line.push_back(',');
    append_csv_field(line, inc_->constraints[i].category);
    line.push_back(',');
    append_double(line, deviations[i]);
    line.push_back('\n');
    *out_ << line;
  }
}

}  // namespace synthpop::ipu
