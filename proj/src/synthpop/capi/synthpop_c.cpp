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

#include "synthpop/synthpop.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "synthpop/assemble/fixtures.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/log.hpp"
#include "synthpop/config/bind.hpp"
#include "synthpop/config/config.hpp"
#include "synthpop/eval/metrics.hpp"
#include "synthpop/io/polygon.hpp"

#ifndef SYNTHPOP_VERSION
#define SYNTHPOP_VERSION "0.0.0"
#endif

struct sp_config {
  synthpop::config::Config impl;
};

struct sp_polygon {
  synthpop::io::RegionPolygon impl;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_help;

sp_status fail(sp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Maps toolkit exceptions onto status codes; nothing escapes the C boundary.
template <typename Fn>
sp_status guarded(Fn&& fn) {
  try {
    fn();
    return SP_OK;
  } catch (const synthpop::InputError& e) {
    return fail(SP_ERR_INPUT, e.what());
  } catch (const synthpop::PipelineError& e) {
    return fail(SP_ERR_PIPELINE, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SP_ERR_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SP_ERR_INTERNAL, std::string("internal error: ") + e.what());
  } catch (...) {
    return fail(SP_ERR_INTERNAL, "internal error");
  }
}

sp_status null_argument(const char* name) { return fail(SP_ERR_ARGUMENT, std::string(name) + " is NULL"); }

const synthpop::config::KeySpec* spec_at(size_t i) {
  const auto s = synthpop::config::schema();
  return i < s.size() ? &s[i] : nullptr;
}

}  // namespace

extern "C" {

const char* sp_version(void) { return SYNTHPOP_VERSION; }

const char* sp_last_error(void) { return g_last_error.c_str(); }

const char* sp_status_name(sp_status status) {
  switch (status) {
    case SP_OK: return "ok";
    case SP_ERR_INPUT: return "input error";
    case SP_ERR_PIPELINE: return "pipeline error";
    case SP_ERR_ARGUMENT: return "invalid argument";
    case SP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void sp_set_log_level(int level) {
  synthpop::log::set_level(static_cast<synthpop::log::Level>(std::clamp(level, 0, 3)));
}

sp_status sp_config_new(sp_config** out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new sp_config{}; });
}

sp_status sp_config_load(const char* path, sp_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new sp_config{synthpop::config::Config::load(path)}; });
}

void sp_config_free(sp_config* config) { delete config; }

sp_status sp_config_override(sp_config* config, const char* assignment) {
  if (!config) return null_argument("config");
  if (!assignment) return null_argument("assignment");
  return guarded([&] { config->impl.apply_override(assignment); });
}

sp_status sp_config_set(sp_config* config, const char* key, const char* value) {
  if (!config) return null_argument("config");
  if (!key) return null_argument("key");
  if (!value) return null_argument("value");
  return guarded([&] { config->impl.set(key, value, std::filesystem::current_path(), "sp_config_set"); });
}

sp_status sp_config_get(const sp_config* config, const char* key, char* buf, size_t buf_size, size_t* needed) {
  if (!config) return null_argument("config");
  if (!key) return null_argument("key");
  bool too_small = false;
  const sp_status s = guarded([&] {
    const std::string v = config->impl.get_string(key);
    if (needed) *needed = v.size() + 1;
    if (!buf) return;
    if (buf_size < v.size() + 1) {
      too_small = true;
      return;
    }
    std::memcpy(buf, v.c_str(), v.size() + 1);
  });
  if (too_small) return fail(SP_ERR_ARGUMENT, "buffer too small for the value of '" + std::string(key) + "'");
  return s;
}

size_t sp_schema_size(void) { return synthpop::config::schema().size(); }

const char* sp_schema_key(size_t i) {
  const auto* k = spec_at(i);
  return k ? k->key.data() : nullptr;
}

const char* sp_schema_type(size_t i) {
  const auto* k = spec_at(i);
  return k ? synthpop::config::type_name(k->type).data() : nullptr;
}

const char* sp_schema_default(size_t i) {
  const auto* k = spec_at(i);
  return k ? k->default_value.data() : nullptr;
}

const char* sp_schema_description(size_t i) {
  const auto* k = spec_at(i);
  return k ? k->help.data() : nullptr;
}

unsigned sp_schema_commands(size_t i) {
  const auto* k = spec_at(i);
  return k ? k->commands : 0u;
}

const char* sp_schema_help(unsigned commands) {
  g_help = synthpop::config::schema_help(commands);
  return g_help.c_str();
}

sp_status sp_generate(const sp_config* config, sp_generate_summary* summary) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const auto cfg = synthpop::with_stage("config", [&] { return synthpop::config::generation_config(config->impl); });
    const auto s = synthpop::assemble::generate(cfg);
    if (summary) {
      *summary = sp_generate_summary{s.target_persons, s.persons,       s.households,  s.workplaces,
                                     s.schools,        s.public_places, s.fit_delta,   s.ipu_iterations,
                                     s.ipu_converged ? 1 : 0};
    }
  });
}

sp_status sp_evaluate(const sp_config* config, sp_evaluate_summary* summary) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const auto cfg = synthpop::with_stage("config", [&] { return synthpop::config::evaluation_config(config->impl); });
    const auto r = synthpop::with_stage("evaluate", [&] { return synthpop::eval::evaluate(cfg); });
    if (summary) {
      sp_evaluate_summary s{r.real_rows, r.synth_rows, 1.0, 1.0, 0.0};
      for (const auto& [c, v] : r.ks_scores) s.min_ks_score = std::min(s.min_ks_score, v);
      for (const auto& [c, v] : r.chi2_pvalues) s.min_chi2_pvalue = std::min(s.min_chi2_pvalue, v);
      for (const auto& e : r.efficacy) s.max_efficacy_gap = std::max(s.max_efficacy_gap, e.score.gap());
      *summary = s;
    }
  });
}

sp_status sp_simulate(const sp_config* config, size_t* scenarios) {
  if (!config) return null_argument("config");
  return guarded([&] {
    const auto job = synthpop::with_stage("config", [&] { return synthpop::config::simulation_job(config->impl); });
    const auto r = synthpop::config::run_simulation(job);
    if (scenarios) *scenarios = r.thresholds.size();
  });
}

sp_status sp_fixtures(const char* out_dir, sp_fixture_summary* summary) {
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const auto s = synthpop::with_stage("fixtures", [&] { return synthpop::assemble::write_fixtures(out_dir); });
    if (summary) *summary = sp_fixture_summary{s.households, s.persons, s.grid_cells, s.scale};
  });
}

sp_status sp_polygon_load(const char* path, sp_polygon** out) {
  if (!path) return null_argument("geojson_path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new sp_polygon{synthpop::io::load_geojson(path)}; });
}

sp_status sp_polygon_parse(const char* text, sp_polygon** out) {
  if (!text) return null_argument("geojson_text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new sp_polygon{synthpop::io::parse_geojson(text)}; });
}

void sp_polygon_free(sp_polygon* polygon) { delete polygon; }

sp_status sp_polygon_contains(const sp_polygon* polygon, double lat, double lon, int* inside) {
  if (!polygon) return null_argument("polygon");
  if (!inside) return null_argument("inside");
  return guarded([&] { *inside = polygon->impl.contains({lat, lon}) ? 1 : 0; });
}

sp_status sp_ks_score(const double* real, size_t n_real, const double* synth, size_t n_synth, double* score) {
  if ((!real && n_real) || (!synth && n_synth)) return null_argument("sample");
  if (!score) return null_argument("score");
  return guarded([&] { *score = synthpop::eval::ks_score({real, n_real}, {synth, n_synth}); });
}

sp_status sp_chi_square_pvalue(const char* const* real, size_t n_real, const char* const* synth, size_t n_synth,
                               double* p_value) {
  if ((!real && n_real) || (!synth && n_synth)) return null_argument("sample");
  if (!p_value) return null_argument("p_value");
  return guarded([&] {
    std::vector<std::string> r, s;
    r.reserve(n_real);
    s.reserve(n_synth);
    for (size_t i = 0; i < n_real; ++i) {
      if (!real[i]) throw synthpop::InputError("real category is NULL");
      r.emplace_back(real[i]);
    }
    for (size_t i = 0; i < n_synth; ++i) {
      if (!synth[i]) throw synthpop::InputError("synthetic category is NULL");
      s.emplace_back(synth[i]);
    }
    *p_value = synthpop::eval::chi_square_pvalue(r, s);
  });
}

}  // extern "C"
