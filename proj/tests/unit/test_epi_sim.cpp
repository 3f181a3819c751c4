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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/epi/epi.hpp"

using namespace synthpop;
using namespace synthpop::epi;

namespace {

// n agents in households of four, with `workplaces` shared workplaces.
EpiPopulation town(std::size_t n, std::size_t workplaces) {
  EpiPopulation pop;
  const std::size_t homes = (n + 3) / 4;
  pop.n_locations = homes + workplaces;
  for (std::size_t a = 0; a < n; ++a) {
    Agent ag;
    ag.age = static_cast<int>(20 + a % 50);
    ag.home = static_cast<std::uint32_t>(a / 4);
    ag.work = static_cast<std::uint32_t>(homes + a % workplaces);
    ag.adherence = 0.5;
    pop.agents.push_back(ag);
  }
  return pop;
}

EpiConfig short_config() {
  EpiConfig c;
  c.days = 30;
  c.n_runs = 3;
  c.initial_infected = 5;
  return c;
}

}  // namespace

TEST_CASE("daily schedules by role") {
  Agent worker{40, 1, 2, 3, false, 0.0};
  CHECK(build_schedule(worker, 2, false) == std::vector<std::uint32_t>{2, 1});
  CHECK(build_schedule(worker, 3, true) == std::vector<std::uint32_t>{2, 3, 1});
  CHECK(build_schedule(worker, 1, false) == std::vector<std::uint32_t>{1});
  Agent homebound{80, 1, kNoLocation, 3, false, 0.0};
  CHECK(build_schedule(homebound, 2, false) == std::vector<std::uint32_t>{1, 1});
  CHECK(build_schedule(homebound, 3, true) == std::vector<std::uint32_t>{1, 3, 1});
}

TEST_CASE("config validation and age bands") {
  EpiConfig c;
  CHECK(c.ticks_per_day() == 2);
  CHECK(c.ticks() == 360);
  CHECK(c.beta_for(5) == 0.20);
  CHECK(c.beta_for(18) == 0.30);
  CHECK(c.beta_for(90) == 0.40);
  auto bad = c;
  bad.tick_length_hours = 7;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = c;
  bad.public_places = true;  // 2 ticks per day is too few
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = c;
  bad.lockdown_threshold = 1.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = c;
  bad.beta_by_age = {{5, 0.1}};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = c;
  bad.initial_infected = 2.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("zero transmission rate: nobody new is infected") {
  auto cfg = short_config();
  cfg.beta_by_age = {{0, 0.0}};
  const auto r = run_once(town(2000, 10), cfg, 0);
  for (const auto& rec : r.series) {
    CHECK(rec.i + rec.r == 5);
  }
}

TEST_CASE("an infected and a susceptible agent alone at home") {
  // One tick: P(infection) = 1 - exp(-beta * 1 / 2).
  EpiPopulation pop;
  pop.n_locations = 1;
  pop.agents = {Agent{30, 0, kNoLocation, kNoLocation, false, 0.0},
                Agent{30, 0, kNoLocation, kNoLocation, false, 0.0}};
  EpiConfig cfg;
  cfg.beta_by_age = {{0, 0.3}};
  cfg.days = 0.5;
  cfg.initial_infected = 1;
  const int reps = 100000;
  int infected = 0;
  for (int rep = 0; rep < reps; ++rep) {
    cfg.rng_seed = static_cast<std::uint64_t>(rep) + 1;
    const auto r = run_once(pop, cfg, 0);
    infected += r.series.back().s == 0;
  }
  const double expected = -std::expm1(-0.3 / 2);
  CHECK(std::fabs(static_cast<double>(infected) / reps - expected) <= 0.01);
}

TEST_CASE("recovery times average the configured mean") {
  EpiPopulation pop;
  const std::size_t n = 100000;
  pop.n_locations = n;
  for (std::size_t a = 0; a < n; ++a) pop.agents.push_back(Agent{30, static_cast<std::uint32_t>(a)});
  EpiConfig cfg;
  cfg.beta_by_age = {{0, 0.0}};
  cfg.initial_infected = 0.999999;  // rounds to everyone
  cfg.days = 200;
  cfg.record_recovery_times = true;
  const auto r = run_once(pop, cfg, 0);
  REQUIRE(r.recovery_times_days.size() == n);
  const double drawn = std::accumulate(r.recovery_times_days.begin(), r.recovery_times_days.end(), 0.0) / n;
  CHECK(std::fabs(drawn - 7.0) <= 0.02 * 7.0);
  // Recovery is noticed at the next tick boundary: on average half a tick late.
  REQUIRE(r.observed_days.size() == n);
  const double observed = std::accumulate(r.observed_days.begin(), r.observed_days.end(), 0.0) / n;
  CHECK(observed - drawn == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("lockdown keeps adherent non-essential agents at home") {
  EpiPopulation pop;
  pop.n_locations = 2;
  const double adherence[] = {1.0, 0.0, 0.5};
  const int sizes[] = {10000, 10000, 100000};
  for (int group = 0; group < 3; ++group) {
    for (int k = 0; k < sizes[group]; ++k) pop.agents.push_back(Agent{30, 0, 1, kNoLocation, false, adherence[group]});
  }
  for (int k = 0; k < 1000; ++k) pop.agents.push_back(Agent{30, 0, 1, kNoLocation, true, 1.0});
  EpiConfig cfg;
  cfg.days = 1;
  cfg.initial_infected = 1;
  cfg.lockdown_threshold = 1e-6;
  const auto r = run_once(pop, cfg, 0);
  REQUIRE(r.lockdown_tick);
  CHECK(*r.lockdown_tick == 1);
  // All of the first group, none of the second, about half of the third and
  // no essential worker stay home.
  const double half = (static_cast<double>(r.agents_home_in_lockdown) - 10000.0) / 100000.0;
  CHECK(std::fabs(half - 0.5) <= 0.01);
  CHECK(r.series[1].lockdown_active);
  CHECK_FALSE(r.series[0].lockdown_active);
}

TEST_CASE("compartments are conserved and recoveries accumulate") {
  const auto pop = town(3000, 20);
  auto cfg = short_config();
  cfg.lockdown_threshold = 0.05;
  const auto r = run_once(pop, cfg, 1);
  REQUIRE(r.series.size() == cfg.ticks() + 1);
  for (std::size_t t = 0; t < r.series.size(); ++t) {
    const auto& rec = r.series[t];
    CHECK(rec.s + rec.i + rec.r == 3000);
    CHECK(rec.tick == t);
    if (t > 0) {
      CHECK(rec.cumulative_recovered >= r.series[t - 1].cumulative_recovered);
      CHECK(rec.s <= r.series[t - 1].s);
    }
  }
}

TEST_CASE("no infection seeds: the state never changes") {
  auto cfg = short_config();
  cfg.initial_infected = 0;
  const auto r = run_once(town(500, 5), cfg, 0);
  for (const auto& rec : r.series) CHECK(rec.s == 500);
}

TEST_CASE("ensembles: determinism, seeds and the mean") {
  const auto pop = town(2000, 15);
  auto cfg = short_config();
  const auto a = run_ensemble(pop, cfg);
  auto threaded = cfg;
  threaded.threads = 3;
  const auto b = run_ensemble(pop, threaded);
  REQUIRE(a.runs.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t t = 0; t < a.runs[k].series.size(); ++t) {
      CHECK(a.runs[k].series[t].i == b.runs[k].series[t].i);
    }
  }
  bool differ = false;
  for (std::size_t t = 0; t < a.runs[0].series.size(); ++t) differ |= a.runs[0].series[t].i != a.runs[1].series[t].i;
  CHECK(differ);

  auto single = cfg;
  single.n_runs = 1;
  const auto one = run_ensemble(pop, single);
  for (std::size_t t = 0; t < one.mean.size(); ++t) {
    CHECK(one.mean[t].i == static_cast<double>(one.runs[0].series[t].i));
  }
  auto reseeded = cfg;
  reseeded.rng_seed = 2;
  const auto c = run_ensemble(pop, reseeded);
  bool seed_differs = false;
  for (std::size_t t = 0; t < c.mean.size(); ++t) seed_differs |= c.mean[t].i != a.mean[t].i;
  CHECK(seed_differs);
}

TEST_CASE("ensemble output files") {
  test::TempDir dir;
  auto cfg = short_config();
  const auto e = run_ensemble(town(400, 4), cfg);
  write_ensemble(e, cfg, dir / "epi");
  for (const char* f : {"run_001.csv", "run_002.csv", "run_003.csv", "mean.csv", "summary.txt"}) {
    CHECK(std::filesystem::exists(dir / "epi" / f));
  }
  const auto mean = test::read_text(dir / "epi" / "mean.csv");
  CHECK(mean.rfind("tick,day,S,I,R,cumulative_recovered,lockdown_active\n", 0) == 0);
  CHECK(threshold_label(std::nullopt) == "lockdown_none");
}

TEST_CASE("population loading") {
  test::TempDir dir;
  const auto ok = test::write_text(dir / "pop.csv",
                                   "HHID,Age,WorkPlaceID,school_id,public_place_id,essential_worker,"
                                   "Adherence_to_Intervention\n"
                                   "1,40,2000000001,0,3000000001,1,0.5\n"
                                   "1,10,0,2000000001,3000000001,0,1\n"
                                   "2,80,0,0,3000000002,0,0\n");
  const auto pop = load_epi_population(ok);
  REQUIRE(pop.agents.size() == 3);
  CHECK(pop.agents[0].home == pop.agents[1].home);
  CHECK(pop.agents[0].work == pop.agents[1].work);  // the school is the teacher's workplace
  CHECK(pop.agents[2].work == kNoLocation);
  CHECK(pop.agents[0].essential);
  CHECK(pop.n_locations == 5);

  const auto missing = test::write_text(dir / "missing.csv", "HHID,Age,WorkPlaceID\n1,40,0\n");
  try {
    load_epi_population(missing);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("school_id") != std::string::npos);
  }
  const auto bad = test::write_text(dir / "bad.csv",
                                    "HHID,Age,WorkPlaceID,school_id,public_place_id,essential_worker,"
                                    "Adherence_to_Intervention\n1,40,0,0,0,1,1.7\n");
  CHECK_THROWS_AS(load_epi_population(bad), InputError);
}
