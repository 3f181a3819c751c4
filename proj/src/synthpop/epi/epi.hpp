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

namespace synthpop::epi {

// beta applies from min_age up to the next band's min_age.
struct AgeBand {
  int min_age = 0;
  double beta = 0.0;
};

struct EpiConfig {
  std::vector<AgeBand> beta_by_age = {{0, 0.20}, {18, 0.30}, {60, 0.40}};
  double recovery_mean_days = 7.0;
  double tick_length_hours = 12.0;
  double days = 180.0;
  // >= 1: number of agents; in (0, 1): fraction of the population.
  double initial_infected = 10.0;
  std::optional<double> lockdown_threshold;  // fraction of the population actively infected
  std::size_t n_runs = 20;
  std::uint64_t rng_seed = 1;
  bool public_places = false;  // adds a public-place tick to every day
  std::size_t threads = 1;     // runs executed concurrently
  bool record_recovery_times = false;

  std::size_t ticks_per_day() const;
  std::size_t ticks() const;
  double beta_for(int age) const;
  void validate() const;
};

inline constexpr std::uint32_t kNoLocation = 0xffffffffu;

struct Agent {
  int age = 0;
  std::uint32_t home = kNoLocation;
  std::uint32_t work = kNoLocation;  // workplace or school
  std::uint32_t public_place = kNoLocation;
  bool essential = false;
  double adherence = 0.0;
};

// Agents with every location mapped into one dense index space.
struct EpiPopulation {
  std::vector<Agent> agents;
  std::size_t n_locations = 0;
};

// Reads HHID, Age, WorkPlaceID, school_id, public_place_id,
// essential_worker and Adherence_to_Intervention. Missing columns raise
// InputError naming the column.
EpiPopulation load_epi_population(const std::filesystem::path& population_csv);

enum class Compartment : std::uint8_t { kS = 0, kI = 1, kR = 2 };

// Location of each agent for each tick of the day: work or school first (home
// if the agent has neither), then the public place when enabled, then home.
std::vector<std::uint32_t> build_schedule(const Agent& a, std::size_t ticks_per_day, bool public_places);

struct TickRecord {
  std::size_t tick = 0;
  std::size_t s = 0, i = 0, r = 0;
  std::size_t cumulative_recovered = 0;
  bool lockdown_active = false;
};

struct RunResult {
  std::vector<TickRecord> series;  // tick 0 is the seeded state
  std::size_t peak_active = 0;
  std::size_t peak_tick = 0;
  std::optional<std::size_t> lockdown_tick;
  std::size_t agents_home_in_lockdown = 0;
  std::vector<double> recovery_times_days;  // drawn durations, if recorded
  std::vector<double> observed_days;        // tick-resolved durations, if recorded
};

// One replicate. Every random decision is a counter-based draw keyed by
// (run seed, agent, tick), so the result does not depend on iteration order.
RunResult run_once(const EpiPopulation& pop, const EpiConfig& config, std::size_t run);

struct MeanRecord {
  std::size_t tick = 0;
  double s = 0, i = 0, r = 0, cumulative_recovered = 0, lockdown_active = 0;
};

struct EnsembleResult {
  std::vector<RunResult> runs;
  std::vector<MeanRecord> mean;
  double mean_peak_active = 0.0;
};

EnsembleResult run_ensemble(const EpiPopulation& pop, const EpiConfig& config);

// run_001.csv ... and mean.csv with columns
// tick,day,S,I,R,cumulative_recovered,lockdown_active, plus summary.txt.
void write_ensemble(const EnsembleResult& result, const EpiConfig& config, const std::filesystem::path& dir);

std::string threshold_label(const std::optional<double>& threshold);

}  // namespace synthpop::epi
