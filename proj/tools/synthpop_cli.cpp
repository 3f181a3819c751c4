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

// Command-line front end. Talks to the toolkit only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synthpop/synthpop.h"

namespace {

constexpr int kExitInput = 1;
constexpr int kExitPipeline = 2;

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  long long threads = -1;
  int verbose = 0;
  std::string population;
  std::string microdata;
};

int exit_code(sp_status s) {
  switch (s) {
    case SP_OK: return 0;
    case SP_ERR_INPUT:
    case SP_ERR_ARGUMENT: return kExitInput;
    default: return kExitPipeline;
  }
}

int report(const char* command, sp_status s) {
  if (s != SP_OK) std::fprintf(stderr, "synthpop %s: %s: %s\n", command, sp_status_name(s), sp_last_error());
  return exit_code(s);
}

// Loads --config (or starts from defaults) and applies the flags on top, in
// the order: overrides, then dedicated flags, so --out always wins.
sp_status build_config(const Options& o, const char* population_key, const char* microdata_key, sp_config** out) {
  sp_status s = o.config.empty() ? sp_config_new(out) : sp_config_load(o.config.c_str(), out);
  if (s != SP_OK) return s;
  auto apply = [&](const std::string& key, const std::string& value) {
    if (s == SP_OK) s = sp_config_set(*out, key.c_str(), value.c_str());
  };
  for (const auto& ov : o.overrides) {
    if (s == SP_OK) s = sp_config_override(*out, ov.c_str());
  }
  if (!o.out.empty()) apply("output.dir", o.out);
  if (o.threads >= 0) apply("threads", std::to_string(o.threads));
  if (population_key && !o.population.empty()) apply(population_key, o.population);
  if (microdata_key && !o.microdata.empty()) apply(microdata_key, o.microdata);
  if (s != SP_OK) {
    sp_config_free(*out);
    *out = nullptr;
  }
  return s;
}

void common_flags(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "config file (key = value lines)")->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "output directory (sets output.dir)");
  app->add_option("--overrides", o.overrides, "key=value ..., repeatable; type-checked against the schema");
  app->add_option("--threads", o.threads, "worker threads (sets threads; 0 = machine parallelism)")
      ->check(CLI::NonNegativeNumber);
  app->add_flag("-v,--verbose", o.verbose, "more log output (repeat for debug)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic population toolkit: generate, evaluate, simulate, fixtures"};
  app.set_version_flag("--version", std::string(sp_version()));
  app.require_subcommand(1);
  Options o;

  auto* generate = app.add_subcommand("generate", "fit IPU weights and write a synthetic population");
  common_flags(generate, o);
  generate->footer(sp_schema_help(SP_CMD_GENERATE));

  auto* evaluate = app.add_subcommand("evaluate", "score a population against its source microdata");
  common_flags(evaluate, o);
  evaluate->add_option("--population", o.population, "population CSV (sets eval.population)");
  evaluate->add_option("--microdata", o.microdata, "source persons CSV (sets eval.individuals)");
  evaluate->footer(sp_schema_help(SP_CMD_EVALUATE));

  auto* simulate = app.add_subcommand("simulate", "run the SIR ensemble over a population");
  common_flags(simulate, o);
  simulate->add_option("--population", o.population, "population CSV (sets epi.population)");
  simulate->footer(sp_schema_help(SP_CMD_SIMULATE));

  auto* fixtures = app.add_subcommand("fixtures", "write the bundled desk-scale input set");
  fixtures->add_option("--out", o.out, "output directory")->required();
  fixtures->add_flag("-v,--verbose", o.verbose, "more log output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  sp_set_log_level(o.verbose >= 2 ? 3 : o.verbose == 1 ? 2 : 1);

  if (fixtures->parsed()) {
    sp_fixture_summary s{};
    const sp_status st = sp_fixtures(o.out.c_str(), &s);
    if (st == SP_OK) {
      std::printf("fixtures: %llu households, %llu persons, %llu grid cells in %s\n",
                  static_cast<unsigned long long>(s.households), static_cast<unsigned long long>(s.persons),
                  static_cast<unsigned long long>(s.grid_cells), o.out.c_str());
    }
    return report("fixtures", st);
  }

  const char* name = generate->parsed() ? "generate" : evaluate->parsed() ? "evaluate" : "simulate";
  sp_config* cfg = nullptr;
  sp_status st = build_config(o, evaluate->parsed() ? "eval.population" : simulate->parsed() ? "epi.population" : nullptr,
                              evaluate->parsed() ? "eval.individuals" : nullptr, &cfg);
  if (st != SP_OK) return report(name, st);

  if (generate->parsed()) {
    sp_generate_summary s{};
    st = sp_generate(cfg, &s);
    if (st == SP_OK) {
      std::printf("generate: %llu persons in %llu households (target %llu); %llu workplaces, %llu schools, "
                  "%llu public places; ipu fit_delta %.3g after %d epochs%s\n",
                  static_cast<unsigned long long>(s.persons), static_cast<unsigned long long>(s.households),
                  static_cast<unsigned long long>(s.target_persons), static_cast<unsigned long long>(s.workplaces),
                  static_cast<unsigned long long>(s.schools), static_cast<unsigned long long>(s.public_places),
                  s.ipu_fit_delta, s.ipu_iterations, s.ipu_converged ? "" : " (not converged)");
    }
  } else if (evaluate->parsed()) {
    sp_evaluate_summary s{};
    st = sp_evaluate(cfg, &s);
    if (st == SP_OK) {
      std::printf("evaluate: %llu synthetic vs %llu source rows; min KS score %.4f, min chi-square p %.4f, "
                  "max efficacy gap %.4f\n",
                  static_cast<unsigned long long>(s.synth_rows), static_cast<unsigned long long>(s.real_rows),
                  s.min_ks_score, s.min_chi2_pvalue, s.max_efficacy_gap);
    }
  } else {
    size_t scenarios = 0;
    st = sp_simulate(cfg, &scenarios);
    if (st == SP_OK) std::printf("simulate: %zu scenario(s) written\n", scenarios);
  }
  sp_config_free(cfg);
  return report(name, st);
}
