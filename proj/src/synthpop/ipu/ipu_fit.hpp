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

#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <vector>

#include "synthpop/ipu/incidence.hpp"

namespace synthpop::ipu {

struct IpuOptions {
  double tol = 1e-3;
  int max_iter = 2000;
  // Called after every epoch with the per-constraint relative deviations.
  std::function<void(int epoch, std::span<const double> deviations)> on_epoch;
};

struct WeightVector {
  std::vector<double> w;
  double fit_delta = 0.0;  // mean |weighted count - target| / target
  int iterations_used = 0;  // update epochs run
  bool converged = false;
};

// Per-constraint relative deviations |sum_j w_j a_ij - t_i| / t_i.
std::vector<double> relative_deviations(const IncidenceMatrix& inc, std::span<const double> targets,
                                        std::span<const double> w);

// Iterative proportional updating. Weights start at 1, rescaled once so the
// grand weighted total equals the grand target total; each epoch then visits
// the constraints in order and rescales the households touching constraint i
// by t_i / (weighted count). Stops once every relative deviation is <= tol
// or after max_iter epochs, returning the weights with the lowest mean
// deviation seen. fit_delta is that mean. Non-convergence
// is reported through `converged`, not thrown.
WeightVector ipu_fit(const IncidenceMatrix& inc, std::span<const double> targets, const IpuOptions& options = {});

// on_epoch sink writing `epoch,constraint,attribute,category,deviation` rows.
class IpuDiagnosticsWriter {
 public:
  IpuDiagnosticsWriter(const std::filesystem::path& path, const IncidenceMatrix& inc);
  void operator()(int epoch, std::span<const double> deviations);

 private:
  std::shared_ptr<std::ofstream> out_;
  const IncidenceMatrix* inc_;
};

}  // namespace synthpop::ipu
