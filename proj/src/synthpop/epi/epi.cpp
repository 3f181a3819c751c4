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

#include "synthpop/epi/epi.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/io/population.hpp"

namespace synthpop::epi {

namespace fs = std::filesystem;

std::size_t EpiConfig::ticks_per_day() const {
  return static_cast<std::size_t>(std::llround(24.0 / tick_length_hours));
}

std::size_t EpiConfig::ticks() const {
  return static_cast<std::size_t>(std::llround(days * static_cast<double>(ticks_per_day())));
}

double EpiConfig::beta_for(int age) const {
  double beta = 0.0;
  for (const auto& band : beta_by_age) {
    if (age >= band.min_age) beta = band.beta;
  }
  return beta;
}

void EpiConfig::validate() const {
  if (beta_by_age.empty()) throw InputError("epi.beta needs at least one age band");
  for (std::size_t k = 0; k < beta_by_age.size(); ++k) {
    if (!(beta_by_age[k].beta >= 0.0) || !std::isfinite(beta_by_age[k].beta)) {
      throw InputError("epi.beta rates must be finite and >= 0");
    }
    if (k == 0 && beta_by_age[k].min_age != 0) throw InputError("the first epi.beta band must start at age 0");
    if (k > 0 && beta_by_age[k].min_age <= beta_by_age[k - 1].min_age) {
      throw InputError("epi.beta band ages must be strictly increasing");
    }
  }
  if (!(recovery_mean_days > 0.0)) throw InputError("epi.recovery_mean_days must be > 0");
  if (!(tick_length_hours > 0.0 && tick_length_hours <= 24.0)) throw InputError("epi.tick_hours must be in (0, 24]");
  const double per_day = 24.0 / tick_length_hours;
  if (std::fabs(per_day - std::round(per_day)) > 1e-9) throw InputError("epi.tick_hours must divide 24");
  if (!(days > 0.0)) throw InputError("epi.days must be > 0");
  if (!(initial_infected >= 0.0)) throw InputError("epi.initial_infected must be >= 0");
  if (initial_infected >= 1.0 && std::floor(initial_infected) != initial_infected) {
    throw InputError("epi.initial_infected must be a whole count or a fraction below 1");
  }
  if (lockdown_threshold && !(*lockdown_threshold > 0.0 && *lockdown_threshold < 1.0)) {
    throw InputError("epi.lockdown_threshold must be in (0, 1)");
  }
  if (n_runs < 1) throw InputError("epi.n_runs must be >= 1");
  if (public_places && ticks_per_day() < 3) {
    throw InputError("epi.public_places needs at least 3 ticks per day (epi.tick_hours <= 8)");
  }
  if (threads < 1) throw InputError("threads must be >= 1");
}

EpiPopulation load_epi_population(const fs::path& path) {
  const std::vector<std::string> names = {"HHID",          "Age",           "WorkPlaceID",
                                          "school_id",     "public_place_id", "essential_worker",
                                          "Adherence_to_Intervention"};
  const auto cols = io::read_columns(path, names);
  const std::size_t n = cols.at("HHID").size();
  EpiPopulation pop;
  pop.agents.resize(n);
  std::unordered_map<std::string, std::uint32_t> homes, work, public_places;
  auto index = [&](std::unordered_map<std::string, std::uint32_t>& map, const std::string& key) {
    const auto [it, inserted] = map.emplace(key, static_cast<std::uint32_t>(pop.n_locations));
    if (inserted) ++pop.n_locations;
    return it->second;
  };
  auto fail = [&](const std::string& col, std::size_t row, const std::string& value) -> void {
    throw InputError(path.string() + ": row " + std::to_string(row + 2) + ", column '" + col +
                     "': invalid value '" + value + "'");
  };
  auto is_none = [](std::string_view v) { return is_missing_token(v) || trim(v) == "0"; };
  for (std::size_t i = 0; i < n; ++i) {
    Agent& a = pop.agents[i];
    const auto& hh = cols.at("HHID")[i];
    if (is_missing_token(hh)) fail("HHID", i, hh);
    a.home = index(homes, std::string(trim(hh)));
    const auto age = parse_int<int>(cols.at("Age")[i]);
    if (!age || *age < 0) fail("Age", i, cols.at("Age")[i]);
    a.age = *age;
    const auto& wp = cols.at("WorkPlaceID")[i];
    const auto& school = cols.at("school_id")[i];
    // Schools are workplaces: one id space, so students meet their teachers.
    if (!is_none(wp)) {
      a.work = index(work, std::string(trim(wp)));
    } else if (!is_none(school)) {
      a.work = index(work, std::string(trim(school)));
    }
    const auto& pp = cols.at("public_place_id")[i];
    if (!is_none(pp)) a.public_place = index(public_places, std::string(trim(pp)));
    const auto ess = parse_int<int>(cols.at("essential_worker")[i]);
    if (!ess || (*ess != 0 && *ess != 1)) fail("essential_worker", i, cols.at("essential_worker")[i]);
    a.essential = *ess == 1;
    const auto adh = parse_double(cols.at("Adherence_to_Intervention")[i]);
    if (!adh || *adh < 0.0 || *adh > 1.0) {
      fail("Adherence_to_Intervention", i, cols.at("Adherence_to_Intervention")[i]);
    }
    a.adherence = *adh;
  }
  if (pop.n_locations >= kNoLocation) throw InputError("too many locations");
  return pop;
}

std::vector<std::uint32_t> build_schedule(const Agent& a, std::size_t ticks_per_day, bool public_places) {
  std::vector<std::uint32_t> plan(ticks_per_day, a.home);
  if (ticks_per_day >= 2 && a.work != kNoLocation) plan[0] = a.work;
  if (public_places && ticks_per_day >= 3 && a.public_place != kNoLocation) plan[1] = a.public_place;
  return plan;
}

RunResult run_once(const EpiPopulation& pop, const EpiConfig& cfg, std::size_t run) {
  cfg.validate();
  const std::size_t n = pop.agents.size();
  const std::uint64_t key = derive_seed(cfg.rng_seed, Stream::kEpiRun, run);
  const std::size_t per_day = cfg.ticks_per_day();
  const std::size_t n_ticks = cfg.ticks();
  const double tick_days = cfg.tick_length_hours / 24.0;

  std::vector<std::uint32_t> plans(n * per_day);
  std::vector<double> beta(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto plan = build_schedule(pop.agents[a], per_day, cfg.public_places);
    std::copy(plan.begin(), plan.end(), plans.begin() + static_cast<std::ptrdiff_t>(a * per_day));
    beta[a] = cfg.beta_for(pop.agents[a].age);
  }

  std::vector<Compartment> state(n, Compartment::kS);
  std::vector<std::uint32_t> infected_at(n, 0);
  std::vector<double> duration(n, 0.0);  // drawn recovery time in days
  std::vector<std::uint8_t> stays_home(n, 0);

  RunResult result;
  auto infect = [&](std::size_t a, std::size_t tick) {
    state[a] = Compartment::kI;
    infected_at[a] = static_cast<std::uint32_t>(tick);
    // Exponential duration; recovering at the first tick boundary past it
    // gives a per-tick recovery probability of 1 - exp(-tick / mean).
    const double u = counter_uniform(key, a, 0, Stream::kEpiRecovery);
    duration[a] = -cfg.recovery_mean_days * std::log1p(-u);
    if (cfg.record_recovery_times) result.recovery_times_days.push_back(duration[a]);
  };

  std::size_t n_seed = cfg.initial_infected >= 1.0
                           ? static_cast<std::size_t>(cfg.initial_infected)
                           : static_cast<std::size_t>(std::llround(cfg.initial_infected * static_cast<double>(n)));
  n_seed = std::min(n_seed, n);
  {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng = make_rng(key, Stream::kEpiSeeding);
    for (std::size_t k = 0; k < n_seed; ++k) std::swap(idx[k], idx[k + uniform_index(rng, n - k)]);
    std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_seed));
    for (std::size_t k = 0; k < n_seed; ++k) infect(idx[k], 0);
  }

  std::size_t s = n - n_seed, i = n_seed, r = 0;
  bool lockdown = false;
  result.series.reserve(n_ticks + 1);
  result.series.push_back({0, s, i, r, r, false});
  result.peak_active = i;

  std::vector<std::uint32_t> occupants(pop.n_locations), infectious(pop.n_locations);
  for (std::size_t tick = 1; tick <= n_ticks; ++tick) {
    // Lockdown is judged on the state entering the tick and never lifted.
    if (!lockdown && cfg.lockdown_threshold &&
        static_cast<double>(i) >= *cfg.lockdown_threshold * static_cast<double>(n)) {
      lockdown = true;
      result.lockdown_tick = tick;
      for (std::size_t a = 0; a < n; ++a) {
        const auto& ag = pop.agents[a];
        stays_home[a] = !ag.essential && counter_uniform(key, a, 0, Stream::kEpiAdherence) < ag.adherence;
        result.agents_home_in_lockdown += stays_home[a];
      }
    }
    const std::size_t slot = (tick - 1) % per_day;
    auto where = [&](std::size_t a) { return stays_home[a] ? pop.agents[a].home : plans[a * per_day + slot]; };

    std::fill(occupants.begin(), occupants.end(), 0);
    std::fill(infectious.begin(), infectious.end(), 0);
    for (std::size_t a = 0; a < n; ++a) {
      const auto loc = where(a);
      ++occupants[loc];
      infectious[loc] += state[a] == Compartment::kI;
    }
    // Synchronous update against the frozen tallies.
    for (std::size_t a = 0; a < n; ++a) {
      if (state[a] == Compartment::kS) {
        const auto loc = where(a);
        if (infectious[loc] == 0 || beta[a] <= 0.0) continue;
        const double lambda = beta[a] * infectious[loc] / occupants[loc];
        if (counter_uniform(key, a, tick, Stream::kEpiInfection) < -std::expm1(-lambda)) {
          infect(a, tick);
          --s;
          ++i;
        }
      } else if (state[a] == Compartment::kI && tick > infected_at[a]) {
        const double elapsed = static_cast<double>(tick - infected_at[a]) * tick_days;
        if (elapsed >= duration[a]) {
          state[a] = Compartment::kR;
          --i;
          ++r;
          if (cfg.record_recovery_times) result.observed_days.push_back(elapsed);
        }
      }
    }
    result.series.push_back({tick, s, i, r, r, lockdown});
    if (i > result.peak_active) {
      result.peak_active = i;
      result.peak_tick = tick;
    }
  }
  return result;
}

EnsembleResult run_ensemble(const EpiPopulation& pop, const EpiConfig& cfg) {
  cfg.validate();
  EnsembleResult out;
  out.runs.resize(cfg.n_runs);
  std::vector<std::exception_ptr> errors(cfg.n_runs);
  const std::size_t workers = std::min(cfg.threads, cfg.n_runs);
  auto worker = [&](std::size_t w) {
    for (std::size_t run = w; run < cfg.n_runs; run += workers) {
      try {
        out.runs[run] = run_once(pop, cfg, run);
      } catch (...) {
        errors[run] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t len = out.runs[0].series.size();
  out.mean.resize(len);
  const double runs = static_cast<double>(cfg.n_runs);
  for (std::size_t t = 0; t < len; ++t) {
    MeanRecord m;
    m.tick = t;
    for (const auto& run : out.runs) {
      const auto& rec = run.series[t];
      m.s += static_cast<double>(rec.s);
      m.i += static_cast<double>(rec.i);
      m.r += static_cast<double>(rec.r);
      m.cumulative_recovered += static_cast<double>(rec.cumulative_recovered);
      m.lockdown_active += rec.lockdown_active ? 1.0 : 0.0;
    }
    m.s /= runs;
    m.i /= runs;
    m.r /= runs;
    m.cumulative_recovered /= runs;
    m.lockdown_active /= runs;
    out.mean[t] = m;
  }
  for (const auto& run : out.runs) out.mean_peak_active += static_cast<double>(run.peak_active);
  out.mean_peak_active /= runs;
  return out;
}

namespace {

void write_header(CsvWriter& out) {
  out.write_row({"tick", "day", "S", "I", "R", "cumulative_recovered", "lockdown_active"});
}

// Run and mean files share one number format, so a one-run mean file is
// byte-identical to its run file.
void write_row(CsvWriter& out, std::string& line, std::size_t tick, double day, double s, double i, double r,
               double cum, double lockdown) {
  line.clear();
  append_int(line, tick);
  for (double v : {day, s, i, r, cum, lockdown}) {
    line += ',';
    append_double(line, v);
  }
  out.write_line(line);
}

std::string run_file_name(std::size_t run) {
  std::string digits = std::to_string(run + 1);
  while (digits.size() < 3) digits.insert(digits.begin(), '0');
  return "run_" + digits + ".csv";
}

}  // namespace

std::string threshold_label(const std::optional<double>& threshold) {
  return threshold ? "lockdown_" + format_double(*threshold) : "lockdown_none";
}

void write_ensemble(const EnsembleResult& result, const EpiConfig& cfg, const fs::path& dir) {
  fs::create_directories(dir);
  const double tick_days = cfg.tick_length_hours / 24.0;
  std::string line;
  for (std::size_t run = 0; run < result.runs.size(); ++run) {
    CsvWriter out(dir / run_file_name(run));
    write_header(out);
    for (const auto& rec : result.runs[run].series) {
      write_row(out, line, rec.tick, static_cast<double>(rec.tick) * tick_days, static_cast<double>(rec.s),
                static_cast<double>(rec.i), static_cast<double>(rec.r), static_cast<double>(rec.cumulative_recovered),
                rec.lockdown_active ? 1.0 : 0.0);
    }
    out.close();
  }
  CsvWriter out(dir / "mean.csv");
  write_header(out);
  for (const auto& m : result.mean) {
    write_row(out, line, m.tick, static_cast<double>(m.tick) * tick_days, m.s, m.i, m.r, m.cumulative_recovered,
              m.lockdown_active);
  }
  out.close();

  std::ofstream summary(dir / "summary.txt", std::ios::binary);
  summary << "lockdown_threshold = " << (cfg.lockdown_threshold ? format_double(*cfg.lockdown_threshold) : "none")
          << "\nn_runs = " << result.runs.size() << "\nmean_peak_active = " << format_fixed(result.mean_peak_active, 3)
          << '\n';
  for (std::size_t run = 0; run < result.runs.size(); ++run) {
    const auto& r = result.runs[run];
    summary << "run." << run + 1 << ".peak_active = " << r.peak_active << "\nrun." << run + 1
            << ".peak_tick = " << r.peak_tick << "\nrun." << run + 1
            << ".lockdown_tick = " << (r.lockdown_tick ? std::to_string(*r.lockdown_tick) : "none") << '\n';
  }
  if (!summary) throw PipelineError("cannot write " + (dir / "summary.txt").string());
}

}  // namespace synthpop::epi
