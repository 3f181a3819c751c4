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
#include <optional>
#include <vector>

#include "synthpop/assemble/generate.hpp"
#include "synthpop/config/config.hpp"
#include "synthpop/epi/epi.hpp"
#include "synthpop/eval/evaluate.hpp"

namespace synthpop::config {

// threads = 0 means the machine parallelism.
std::size_t resolve_threads(std::uint64_t requested);

io::MicroSchema microdata_schema(const Config& c);
assemble::GenerationConfig generation_config(const Config& c);
eval::EvalConfig evaluation_config(const Config& c);

struct SimulationJob {
  epi::EpiConfig epi;
  std::filesystem::path population;
  std::vector<std::optional<double>> thresholds;
  std::filesystem::path out_dir;
};

SimulationJob simulation_job(const Config& c);

// Loads the population once and runs one ensemble per threshold. A single
// threshold writes into out_dir; a sweep writes one subdirectory per value
// (lockdown_0.01, lockdown_none, ...).
struct SweepResult {
  std::vector<std::optional<double>> thresholds;
  std::vector<double> mean_peak_active;
};
SweepResult run_simulation(const SimulationJob& job);

}  // namespace synthpop::config
