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
#include <optional>
#include <string>
#include <vector>

#include "synthpop/attr/stratified_resampler.hpp"
#include "synthpop/geo/density_sampler.hpp"
#include "synthpop/io/grid.hpp"
#include "synthpop/io/microdata.hpp"
#include "synthpop/ipu/binning.hpp"
#include "synthpop/loc/decay.hpp"

namespace synthpop::assemble {

struct GenerationConfig {
  std::string region_id;  // also written to the District column
  std::uint64_t region_code = 1;

  std::filesystem::path individuals;
  std::filesystem::path households;
  std::filesystem::path marginals;
  std::filesystem::path grid;
  std::filesystem::path polygon;
  std::optional<std::filesystem::path> admin_units;
  io::MicroSchema schema;

  std::optional<std::uint64_t> target_population;  // default: person-marginal total
  std::size_t n_workplaces = 1000;
  std::size_t n_public_places = 500;
  std::uint64_t rng_seed = 1;

  double ipu_tol = 1e-3;
  int ipu_max_iter = 2000;
  std::optional<std::filesystem::path> ipu_diagnostics;
  BinningConfig binning;

  double cell_size = io::kDefaultCellSize;
  geo::SamplerOptions sampler;

  attr::ResamplerOptions resampler;

  loc::DecayFunction work_decay;
  loc::DecayFunction public_decay;
  std::size_t nearest_n = 200;  // 0: weigh every candidate

  // Adherence is uniform over {min, min + step, ..., max}.
  double adherence_min = 0.0;
  double adherence_max = 1.0;
  double adherence_step = 0.1;
  double essential_worker_rate = 0.05;
  int public_transport_jobs = 1;

  std::size_t threads = 1;
  std::size_t batch_households = 4096;

  std::filesystem::path out_dir;
  // Canonical text of the configuration, hashed into the provenance file.
  std::string config_text;
};

struct GenerationSummary {
  std::uint64_t target_persons = 0;
  std::uint64_t persons = 0;
  std::uint64_t households = 0;
  std::size_t workplaces = 0;
  std::size_t schools = 0;
  std::size_t public_places = 0;
  double fit_delta = 0.0;
  int ipu_iterations = 0;
  bool ipu_converged = false;
  std::vector<std::string> warnings;
};

// Checks ranges and combinations that do not need the input files.
void validate(const GenerationConfig& config);

std::vector<double> adherence_levels(double min, double max, double step);

// Runs the whole pipeline and writes population.csv, locations.csv,
// attribute_model.json and provenance.json into config.out_dir. Output
// depends only on the config (including rng_seed), never on config.threads.
// Errors carry the name of the failing stage.
GenerationSummary generate(const GenerationConfig& config);

}  // namespace synthpop::assemble
