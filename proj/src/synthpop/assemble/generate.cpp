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

#include "synthpop/assemble/generate.hpp"

#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "synthpop/assemble/locations.hpp"
#include "synthpop/attr/job_table.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/hash.hpp"
#include "synthpop/common/log.hpp"
#include "synthpop/io/marginals.hpp"
#include "synthpop/io/polygon.hpp"
#include "synthpop/io/population.hpp"
#include "synthpop/ipu/household_sampler.hpp"
#include "synthpop/ipu/incidence.hpp"
#include "synthpop/ipu/ipu_fit.hpp"

#ifndef SYNTHPOP_VERSION
#define SYNTHPOP_VERSION "0.0.0"
#endif

namespace synthpop::assemble {

namespace fs = std::filesystem;

void validate(const GenerationConfig& c) {
  if (c.region_code < 1 || c.region_code > kMaxRegionCode) {
    throw InputError("region_code must be between 1 and " + std::to_string(kMaxRegionCode));
  }
  if (c.target_population && *c.target_population < 1) throw InputError("target_population must be >= 1");
  if (c.n_workplaces < 1) throw InputError("n_workplaces must be >= 1");
  if (c.n_public_places < 1) throw InputError("n_public_places must be >= 1");
  if (!(c.ipu_tol > 0.0)) throw InputError("ipu.tol must be > 0");
  if (c.ipu_max_iter < 1) throw InputError("ipu.max_iter must be >= 1");
  if (!(c.cell_size > 0.0) || !std::isfinite(c.cell_size)) throw InputError("sampler.cell_size must be > 0");
  if (!(c.sampler.oversample_factor >= 1.0)) throw InputError("sampler.oversample_factor must be >= 1");
  if (!(c.sampler.acceptance_floor > 0.0 && c.sampler.acceptance_floor <= 1.0)) {
    throw InputError("sampler.acceptance_floor must be in (0, 1]");
  }
  if (!(c.resampler.jitter_scale >= 0.0)) throw InputError("attributes.jitter_scale must be >= 0");
  if (c.resampler.min_stratum_size < 1) throw InputError("attributes.min_stratum_size must be >= 1");
  c.work_decay.validate();
  c.public_decay.validate();
  adherence_levels(c.adherence_min, c.adherence_max, c.adherence_step);
  if (!(c.essential_worker_rate >= 0.0 && c.essential_worker_rate <= 1.0)) {
    throw InputError("essential_worker_rate must be in [0, 1]");
  }
  if (c.threads < 1) throw InputError("threads must be >= 1");
  if (c.batch_households < 1) throw InputError("batch_households must be >= 1");
  if (c.out_dir.empty()) throw InputError("no output directory given");
}

std::vector<double> adherence_levels(double min, double max, double step) {
  if (!(min >= 0.0 && max <= 1.0 && min <= max)) throw InputError("adherence range must satisfy 0 <= min <= max <= 1");
  if (!(step > 0.0)) throw InputError("adherence.step must be > 0");
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> levels(n);
  for (std::size_t k = 0; k < n; ++k) {
    // Rounded so 0.1 * 3 prints as 0.3.
    levels[k] = std::round((min + static_cast<double>(k) * step) * 1e9) / 1e9;
  }
  return levels;
}

namespace {

struct Context {
  const GenerationConfig& cfg;
  const io::MicroSample& sample;
  const attr::StratifiedResampler& attributes;
  const attr::JobTable& jobs;
  const geo::DensitySampler& sampler;
  const LocationTables& tables;
  const loc::LocationSet& index;
  const std::vector<AdminUnit>& admin_units;
  std::vector<double> adherence;
};

void set_location(const loc::ExternalLocation& e, std::uint64_t& id, std::optional<LatLon>& pos) {
  id = e.id;
  pos = e.position;
}

std::vector<io::PersonRecord> synthesize_batch(const Context& ctx, std::uint64_t batch,
                                               const std::vector<ipu::HouseholdTemplate>& households) {
  const auto& cfg = ctx.cfg;
  Rng home_rng = make_rng(cfg.rng_seed, Stream::kHomes, batch);
  Rng attr_rng = make_rng(cfg.rng_seed, Stream::kAttributes, batch);
  Rng assign_rng = make_rng(cfg.rng_seed, Stream::kAssignment, batch);
  const auto homes = ctx.sampler.sample_points(households.size(), home_rng);

  std::size_t n_persons = 0;
  for (const auto& t : households) n_persons += t.size;
  std::vector<io::PersonRecord> out;
  out.reserve(n_persons);

  loc::DecayChoice work_choice;
  loc::DecayChoice school_choice;
  loc::DecayChoice public_choice;
  std::vector<attr::Job> jobs;
  for (std::size_t h = 0; h < households.size(); ++h) {
    const auto& t = households[h];
    const auto& donor_hh = ctx.sample.households[t.source];
    const LatLon home = homes[h];

    jobs.clear();
    bool has_worker = false;
    bool has_student = false;
    for (const auto m : donor_hh.members) {
      jobs.push_back(attr::assign_job(ctx.sample.persons[m].age, ctx.jobs, attr_rng));
      const auto role = loc::role_for_job(jobs.back().label);
      has_worker = has_worker || role == loc::Role::kWorker;
      has_student = has_student || role == loc::Role::kStudent;
    }
    // Candidate weights depend only on the home, shared by every member.
    if (has_worker) work_choice.prepare(home, ctx.index.workplaces, cfg.work_decay);
    if (has_student) school_choice.prepare(home, ctx.index.schools, cfg.work_decay);
    public_choice.prepare(home, ctx.index.public_places, cfg.public_decay);

    const std::uint64_t hhid = household_id(cfg.region_code, t.household_seq);
    for (std::size_t k = 0; k < donor_hh.members.size(); ++k) {
      const auto& donor = ctx.sample.persons[donor_hh.members[k]];
      io::PersonRecord p;
      p.age = donor.age;
      p.sex = donor.sex;
      const auto draw = ctx.attributes.sample(donor.age, donor.sex, attr_rng);
      p.height = draw.height;
      p.weight = draw.weight;
      p.comorbidities = draw.comorbidities;
      p.hhid = hhid;
      p.home = home;
      p.district = cfg.region_id;
      p.religion = donor.religion;
      p.caste = donor.caste;
      p.job_label = jobs[k].label;
      p.job_id = jobs[k].id;
      const auto role = loc::role_for_job(p.job_label);
      p.essential_worker = role == loc::Role::kWorker && uniform01(attr_rng) < cfg.essential_worker_rate;
      p.adherence = ctx.adherence[uniform_index(attr_rng, ctx.adherence.size())];
      p.public_transport_jobs = cfg.public_transport_jobs;
      if (role == loc::Role::kWorker) {
        set_location(ctx.tables.workplaces[work_choice.draw(assign_rng)], p.workplace_id, p.workplace);
      } else if (role == loc::Role::kStudent) {
        set_location(ctx.tables.schools[school_choice.draw(assign_rng)], p.school_id, p.school);
      }
      set_location(ctx.tables.public_places[public_choice.draw(assign_rng)], p.public_place_id, p.public_place);
      p.agent_id = agent_id(cfg.region_code, t.first_person_seq + k);
      p.psu_id = donor_hh.psu_id;
      p.age_group = cfg.binning.age_bins.label_for(donor.age);
      p.household_size = static_cast<int>(t.size);
      p.member_index = static_cast<int>(k + 1);
      p.source_hhid = donor_hh.household_id;
      p.source_person_id = donor.person_id;
      out.push_back(std::move(p));
    }
  }
  if (!ctx.admin_units.empty()) attach_admin_units(out, ctx.admin_units);
  return out;
}

// Draws up to `count` batches from the household stream.
std::vector<std::vector<ipu::HouseholdTemplate>> next_batches(ipu::HouseholdStream& stream, std::size_t count,
                                                              std::size_t batch_size) {
  std::vector<std::vector<ipu::HouseholdTemplate>> batches;
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<ipu::HouseholdTemplate> batch;
    batch.reserve(batch_size);
    while (batch.size() < batch_size) {
      auto t = stream.next();
      if (!t) break;
      batch.push_back(*t);
    }
    if (batch.empty()) break;
    const bool last = batch.size() < batch_size;
    batches.push_back(std::move(batch));
    if (last) break;
  }
  return batches;
}

std::vector<std::vector<io::PersonRecord>> synthesize_parallel(
    const Context& ctx, std::uint64_t first_batch, const std::vector<std::vector<ipu::HouseholdTemplate>>& batches) {
  std::vector<std::vector<io::PersonRecord>> results(batches.size());
  if (batches.size() == 1) {
    results[0] = synthesize_batch(ctx, first_batch, batches[0]);
    return results;
  }
  std::vector<std::exception_ptr> errors(batches.size());
  std::vector<std::thread> workers;
  workers.reserve(batches.size() - 1);
  auto run = [&](std::size_t i) {
    try {
      results[i] = synthesize_batch(ctx, first_batch + i, batches[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  for (std::size_t i = 1; i < batches.size(); ++i) workers.emplace_back(run, i);
  run(0);
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

bool students_exist(const io::MicroSample& sample, std::span<const double> weights) {
  for (std::size_t h = 0; h < sample.households.size(); ++h) {
    if (!(weights[h] > 0.0)) continue;
    for (const auto m : sample.households[h].members) {
      const int age = sample.persons[m].age;
      if (age >= attr::kStudentAge && age < attr::kAdultAge) return true;
    }
  }
  return false;
}

void write_provenance(const GenerationConfig& cfg, const GenerationSummary& summary, const fs::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "synthpop.provenance";
  j["version"] = SYNTHPOP_VERSION;
  j["config_sha256"] = sha256_hex(cfg.config_text);
  j["rng_seed"] = cfg.rng_seed;
  j["region_id"] = cfg.region_id;
  auto& inputs = j["inputs"];
  auto add = [&](const char* name, const fs::path& p) {
    inputs[name] = {{"path", p.generic_string()}, {"sha256", sha256_file(p)}};
  };
  add("individuals", cfg.individuals);
  add("households", cfg.households);
  add("marginals", cfg.marginals);
  add("grid", cfg.grid);
  add("polygon", cfg.polygon);
  if (cfg.admin_units) add("admin_units", *cfg.admin_units);
  j["modules"] = {{"ipu_core", SYNTHPOP_VERSION},   {"geo_sampler", SYNTHPOP_VERSION},
                  {"attr_synth", SYNTHPOP_VERSION}, {"loc_assign", SYNTHPOP_VERSION},
                  {"assembler", SYNTHPOP_VERSION}};
  j["summary"] = {{"target_persons", summary.target_persons},
                  {"persons", summary.persons},
                  {"households", summary.households},
                  {"workplaces", summary.workplaces},
                  {"schools", summary.schools},
                  {"public_places", summary.public_places},
                  {"ipu_fit_delta", summary.fit_delta},
                  {"ipu_iterations", summary.ipu_iterations},
                  {"ipu_converged", summary.ipu_converged}};
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
  if (!out) throw PipelineError("cannot write " + path.string());
}

}  // namespace

GenerationSummary generate(const GenerationConfig& cfg) {
  with_stage("config", [&] { validate(cfg); });
  GenerationSummary summary;

  const auto sample =
      with_stage("load microdata", [&] { return io::load_microdata(cfg.individuals, cfg.households, cfg.schema); });
  const auto marginals = with_stage("load marginals", [&] { return io::load_marginals(cfg.marginals, cfg.region_id); });
  const auto grid = with_stage("load grid", [&] { return io::load_grid(cfg.grid, cfg.cell_size); });
  const auto polygon = with_stage("load polygon", [&] { return io::load_geojson(cfg.polygon); });
  const auto admin_units = with_stage("load admin units", [&] {
    return cfg.admin_units ? load_admin_units(*cfg.admin_units) : std::vector<AdminUnit>{};
  });
  summary.warnings = sample.warnings;
  summary.warnings.insert(summary.warnings.end(), marginals.warnings.begin(), marginals.warnings.end());

  const auto fit = with_stage("ipu", [&] {
    const auto inc = ipu::build_incidence(sample, marginals, cfg.binning);
    const auto targets = ipu::constraint_targets(marginals, inc);
    ipu::IpuOptions options;
    options.tol = cfg.ipu_tol;
    options.max_iter = cfg.ipu_max_iter;
    if (cfg.ipu_diagnostics) options.on_epoch = ipu::IpuDiagnosticsWriter(*cfg.ipu_diagnostics, inc);
    return ipu::ipu_fit(inc, targets, options);
  });
  summary.fit_delta = fit.fit_delta;
  summary.ipu_iterations = fit.iterations_used;
  summary.ipu_converged = fit.converged;
  if (!fit.converged) {
    summary.warnings.push_back("ipu did not reach tol " + std::to_string(cfg.ipu_tol) + " in " +
                               std::to_string(cfg.ipu_max_iter) + " epochs (fit_delta " +
                               std::to_string(fit.fit_delta) + ")");
  }

  summary.target_persons = cfg.target_population
                               ? *cfg.target_population
                               : static_cast<std::uint64_t>(std::llround(marginals.person_total()));
  if (summary.target_persons < 1) throw InputError("stage 'config': target_population resolves to 0");

  attr::StratifiedResampler attributes(cfg.resampler);
  const auto jobs = with_stage("attribute model", [&] {
    attributes.fit(sample);
    return attr::JobTable::from_microdata(sample);
  });

  const auto sampler =
      with_stage("geo sampler", [&] { return geo::DensitySampler::build(grid, polygon, cfg.sampler); });

  const auto tables = with_stage("locations", [&] {
    LocationCounts counts{cfg.n_workplaces, cfg.n_public_places, cfg.region_code};
    return generate_locations(counts, sampler, jobs, students_exist(sample, fit.w), cfg.rng_seed);
  });
  summary.workplaces = tables.workplaces.size();
  summary.schools = tables.schools.size();
  summary.public_places = tables.public_places.size();
  const loc::LocationSet index{loc::CandidateIndex(tables.workplaces, cfg.nearest_n),
                               loc::CandidateIndex(tables.schools, cfg.nearest_n),
                               loc::CandidateIndex(tables.public_places, cfg.nearest_n)};

  with_stage("output", [&] { fs::create_directories(cfg.out_dir); });
  const Context ctx{cfg,    sample, attributes, jobs, sampler, tables, index, admin_units,
                    adherence_levels(cfg.adherence_min, cfg.adherence_max, cfg.adherence_step)};

  with_stage("synthesis", [&] {
    ipu::HouseholdStream stream(fit.w, sample, summary.target_persons, cfg.rng_seed);
    io::PopulationWriter writer(cfg.out_dir / "population.csv");
    std::uint64_t next_batch = 0;
    for (;;) {
      const auto batches = next_batches(stream, cfg.threads, cfg.batch_households);
      if (batches.empty()) break;
      const auto results = synthesize_parallel(ctx, next_batch, batches);
      next_batch += batches.size();
      for (const auto& r : results) writer.write(r);
    }
    writer.close();
    summary.persons = writer.rows();
    summary.households = stream.households_emitted();
  });

  with_stage("output", [&] {
    write_locations(tables, cfg.out_dir / "locations.csv");
    attributes.save(cfg.out_dir / "attribute_model.json");
    write_provenance(cfg, summary, cfg.out_dir / "provenance.json");
  });
  for (const auto& w : summary.warnings) log::warn(w);
  return summary;
}

}  // namespace synthpop::assemble
