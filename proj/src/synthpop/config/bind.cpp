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

#include "synthpop/config/bind.hpp"

#include <thread>

#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::config {

namespace fs = std::filesystem;

std::size_t resolve_threads(std::uint64_t requested) {
  if (requested > 0) return static_cast<std::size_t>(requested);
  const auto hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

io::MicroSchema microdata_schema(const Config& c) {
  io::MicroSchema s;
  s.person_id = c.get_string("columns.person_id");
  s.household_id = c.get_string("columns.household_id");
  s.age = c.get_string("columns.age");
  s.sex = c.get_string("columns.sex");
  s.religion = c.get_string("columns.religion");
  s.caste = c.get_string("columns.caste");
  s.height = c.get_string("columns.height");
  s.weight = c.get_string("columns.weight");
  s.job_label = c.get_string("columns.job_label");
  s.job_id = c.get_string("columns.job_id");
  s.psu_id = c.get_string("columns.psu_id");
  s.household_size = c.get_string("columns.household_size");
  s.max_age = static_cast<int>(c.get_int("bounds.max_age"));
  s.max_height = c.get_double("bounds.max_height");
  s.max_weight = c.get_double("bounds.max_weight");
  return s;
}

namespace {

loc::DecayFunction decay(const Config& c, const std::string& prefix) {
  loc::DecayFunction f;
  f.form = loc::parse_decay_form(c.get_string(prefix + ".form"));
  f.d_min = c.get_double(prefix + ".d_min");
  f.rate = c.get_double(prefix + ".rate");
  f.exponent = c.get_double(prefix + ".exponent");
  return f;
}

}  // namespace

assemble::GenerationConfig generation_config(const Config& c) {
  assemble::GenerationConfig g;
  g.region_id = c.get_string("region_id");
  g.region_code = c.get_uint("region_code");
  g.individuals = c.require_path("input.individuals");
  g.households = c.require_path("input.households");
  g.marginals = c.require_path("input.marginals");
  g.grid = c.require_path("input.grid");
  g.polygon = c.require_path("input.polygon");
  g.admin_units = c.get_path("input.admin_units");
  g.schema = microdata_schema(c);
  if (const auto t = c.get_uint("target_population"); t > 0) g.target_population = t;
  g.n_workplaces = c.get_uint("n_workplaces");
  g.n_public_places = c.get_uint("n_public_places");
  g.rng_seed = c.get_uint("rng_seed");
  g.ipu_tol = c.get_double("ipu.tol");
  g.ipu_max_iter = static_cast<int>(c.get_int("ipu.max_iter"));
  g.ipu_diagnostics = c.get_path("ipu.diagnostics");
  g.binning.age_bins = AgeBins(c.get_int_list("binning.age_edges"));
  g.binning.household_size_cap = static_cast<int>(c.get_int("binning.household_size_cap"));
  if (g.binning.household_size_cap < 1) throw InputError("binning.household_size_cap must be >= 1");
  g.cell_size = c.get_double("sampler.cell_size");
  g.sampler.oversample_factor = c.get_double("sampler.oversample_factor");
  g.sampler.acceptance_floor = c.get_double("sampler.acceptance_floor");
  g.sampler.min_draws_before_floor = c.get_uint("sampler.min_draws");
  g.resampler.jitter_scale = c.get_double("attributes.jitter_scale");
  g.resampler.min_stratum_size = c.get_uint("attributes.min_stratum_size");
  g.resampler.age_bins = AgeBins(c.get_int_list("attributes.age_edges"));
  g.work_decay = decay(c, "decay");
  g.public_decay = decay(c, "public_decay");
  g.nearest_n = c.get_uint("assign.nearest_n");
  g.adherence_min = c.get_double("adherence.min");
  g.adherence_max = c.get_double("adherence.max");
  g.adherence_step = c.get_double("adherence.step");
  g.essential_worker_rate = c.get_double("essential_worker_rate");
  g.public_transport_jobs = static_cast<int>(c.get_int("public_transport_jobs"));
  g.threads = resolve_threads(c.get_uint("threads"));
  g.batch_households = c.get_uint("batch_households");
  g.out_dir = c.require_path("output.dir");
  g.config_text = c.canonical(kGenerate);
  return g;
}

eval::EvalConfig evaluation_config(const Config& c) {
  eval::EvalConfig e;
  e.population = c.require_path("eval.population");
  e.individuals = c.require_path("eval.individuals");
  e.schema = microdata_schema(c);
  e.ks_columns = c.get_string_list("eval.ks_columns");
  e.chi2_columns = c.get_string_list("eval.chi2_columns");
  e.efficacy = c.get_bool("eval.efficacy");
  e.test_fraction = c.get_double("eval.test_fraction");
  e.max_synth_rows = c.get_uint("eval.max_synth_rows");
  e.mlp.hidden = c.get_uint("eval.mlp.hidden");
  e.mlp.epochs = c.get_uint("eval.mlp.epochs");
  e.mlp.learning_rate = c.get_double("eval.mlp.learning_rate");
  e.mlp.momentum = c.get_double("eval.mlp.momentum");
  e.mlp.batch_size = c.get_uint("eval.mlp.batch_size");
  e.plots = c.get_bool("eval.plots");
  e.histogram_bin_width = c.get_double("eval.histogram_bin_width");
  e.scatter_cap = c.get_uint("eval.scatter_cap");
  e.rng_seed = c.get_uint("rng_seed");
  e.out_dir = c.require_path("output.dir");
  return e;
}

SimulationJob simulation_job(const Config& c) {
  SimulationJob job;
  job.population = c.require_path("epi.population");
  auto& e = job.epi;
  e.beta_by_age.clear();
  for (const auto& item : c.get_string_list("epi.beta")) {
    const auto colon = item.find(':');
    e.beta_by_age.push_back({*parse_int<int>(item.substr(0, colon)), *parse_double(item.substr(colon + 1))});
  }
  e.recovery_mean_days = c.get_double("epi.recovery_mean_days");
  e.tick_length_hours = c.get_double("epi.tick_hours");
  e.days = c.get_double("epi.days");
  e.initial_infected = c.get_double("epi.initial_infected");
  e.n_runs = c.get_uint("epi.n_runs");
  e.rng_seed = c.get_uint("rng_seed");
  e.public_places = c.get_bool("epi.public_places");
  e.threads = resolve_threads(c.get_uint("threads"));
  for (const auto& item : c.get_string_list("epi.lockdown_threshold")) {
    job.thresholds.push_back(item == "none" ? std::nullopt : parse_double(item));
  }
  if (job.thresholds.empty()) job.thresholds.push_back(std::nullopt);
  for (std::size_t a = 0; a < job.thresholds.size(); ++a) {
    for (std::size_t b = a + 1; b < job.thresholds.size(); ++b) {
      if (job.thresholds[a] == job.thresholds[b]) throw InputError("epi.lockdown_threshold lists a value twice");
    }
  }
  job.out_dir = c.require_path("output.dir");
  e.validate();
  return job;
}

SweepResult run_simulation(const SimulationJob& job) {
  job.epi.validate();
  const auto pop = with_stage("load population", [&] { return epi::load_epi_population(job.population); });
  SweepResult out;
  for (const auto& threshold : job.thresholds) {
    auto cfg = job.epi;
    cfg.lockdown_threshold = threshold;
    const auto result = with_stage("simulate", [&] { return epi::run_ensemble(pop, cfg); });
    const fs::path dir = job.thresholds.size() == 1 ? job.out_dir : job.out_dir / epi::threshold_label(threshold);
    with_stage("output", [&] { epi::write_ensemble(result, cfg, dir); });
    out.thresholds.push_back(threshold);
    out.mean_peak_active.push_back(result.mean_peak_active);
  }
  return out;
}

}  // namespace synthpop::config
