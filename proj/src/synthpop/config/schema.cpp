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

#include "synthpop/config/schema.hpp"

#include <array>
#include <cmath>

#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::config {

namespace {

constexpr unsigned kGE = kGenerate | kEvaluate;

// clang-format off
constexpr std::array kSchema = {
    KeySpec{"schema_version", ValueType::kInt, "1", kAllCommands, "config format version; must be 1"},
    KeySpec{"rng_seed", ValueType::kUInt, "1", kAllCommands, "master seed; every random stream derives from it"},
    KeySpec{"threads", ValueType::kUInt, "0", kAllCommands, "worker threads; 0 uses the machine parallelism"},
    KeySpec{"output.dir", ValueType::kPath, ".", kAllCommands, "output directory (--out overrides)"},

    KeySpec{"columns.person_id", ValueType::kString, "Agent_ID", kGE, "microdata column: person id"},
    KeySpec{"columns.household_id", ValueType::kString, "HHID", kGE, "microdata column: household id"},
    KeySpec{"columns.age", ValueType::kString, "Age", kGE, "microdata column: age in years"},
    KeySpec{"columns.sex", ValueType::kString, "SexLabel", kGE, "microdata column: sex"},
    KeySpec{"columns.religion", ValueType::kString, "Religion", kGE, "microdata column: religion"},
    KeySpec{"columns.caste", ValueType::kString, "Caste", kGE, "microdata column: caste"},
    KeySpec{"columns.height", ValueType::kString, "Height", kGE, "microdata column: height (cm)"},
    KeySpec{"columns.weight", ValueType::kString, "Weight", kGE, "microdata column: weight (kg)"},
    KeySpec{"columns.job_label", ValueType::kString, "JobLabel", kGE, "microdata column: job description"},
    KeySpec{"columns.job_id", ValueType::kString, "JobID", kGE, "microdata column: job id"},
    KeySpec{"columns.psu_id", ValueType::kString, "PSUID", kGE, "household column: primary sampling unit"},
    KeySpec{"columns.household_size", ValueType::kString, "HouseholdSize", kGE, "household column: declared size"},
    KeySpec{"bounds.max_age", ValueType::kInt, "120", kGenerate, "largest accepted age"},
    KeySpec{"bounds.max_height", ValueType::kDouble, "250", kGenerate, "largest accepted height (cm)"},
    KeySpec{"bounds.max_weight", ValueType::kDouble, "300", kGenerate, "largest accepted weight (kg)"},

    KeySpec{"region_id", ValueType::kString, "region", kGenerate, "region name; selects marginal rows and fills District"},
    KeySpec{"region_code", ValueType::kUInt, "1", kGenerate, "numeric id prefix, 1..999"},
    KeySpec{"input.individuals", ValueType::kPath, "", kGenerate, "microdata persons CSV (required)"},
    KeySpec{"input.households", ValueType::kPath, "", kGenerate, "microdata households CSV (required)"},
    KeySpec{"input.marginals", ValueType::kPath, "", kGenerate, "marginals CSV: region,attribute,category,count (required)"},
    KeySpec{"input.grid", ValueType::kPath, "", kGenerate, "grid density CSV: X,Y,Z (required)"},
    KeySpec{"input.polygon", ValueType::kPath, "", kGenerate, "region boundary GeoJSON (required)"},
    KeySpec{"input.admin_units", ValueType::kPath, "", kGenerate, "admin unit centers CSV: name,lat,lon (optional)"},
    KeySpec{"target_population", ValueType::kUInt, "0", kGenerate, "persons to generate; 0 uses the person-marginal total"},
    KeySpec{"n_workplaces", ValueType::kUInt, "1000", kGenerate, "workplaces to create (schools are the Teacher ones)"},
    KeySpec{"n_public_places", ValueType::kUInt, "500", kGenerate, "public places to create"},
    KeySpec{"ipu.tol", ValueType::kDouble, "0.001", kGenerate, "IPU stops when every constraint is within this relative deviation"},
    KeySpec{"ipu.max_iter", ValueType::kInt, "2000", kGenerate, "IPU epoch limit"},
    KeySpec{"ipu.diagnostics", ValueType::kPath, "", kGenerate, "optional CSV of per-epoch constraint deviations"},
    KeySpec{"binning.age_edges", ValueType::kIntList, "0,5,10,15,20,25,30,35,40,45,50,55,60,65,70,75,80,85", kGenerate,
            "lower edges of the marginal age groups"},
    KeySpec{"binning.household_size_cap", ValueType::kInt, "7", kGenerate, "household sizes from this up share '<cap>+'"},
    KeySpec{"sampler.cell_size", ValueType::kDouble, "0.008333333333333333", kGenerate, "grid cell side S in degrees"},
    KeySpec{"sampler.oversample_factor", ValueType::kDouble, "1.5", kGenerate, "candidates drawn per missing point"},
    KeySpec{"sampler.acceptance_floor", ValueType::kDouble, "0.001", kGenerate, "fail when the acceptance rate drops below this"},
    KeySpec{"sampler.min_draws", ValueType::kUInt, "10000", kGenerate, "draws before the acceptance floor applies"},
    KeySpec{"attributes.jitter_scale", ValueType::kDouble, "0.1", kGenerate, "height/weight jitter as a fraction of the stratum std"},
    KeySpec{"attributes.min_stratum_size", ValueType::kUInt, "20", kGenerate, "smaller age-sex strata merge with a neighbour"},
    KeySpec{"attributes.age_edges", ValueType::kIntList, "0,5,10,15,20,25,30,35,40,45,50,55,60,65,70,75,80,85", kGenerate,
            "lower edges of the attribute strata age bins"},
    KeySpec{"decay.form", ValueType::kChoice, "reciprocal", kGenerate, "workplace/school distance decay",
            "reciprocal|exponential|power"},
    KeySpec{"decay.d_min", ValueType::kDouble, "0.0001", kGenerate, "distance floor in degrees"},
    KeySpec{"decay.rate", ValueType::kDouble, "100", kGenerate, "exponential decay rate per degree"},
    KeySpec{"decay.exponent", ValueType::kDouble, "1", kGenerate, "power decay exponent"},
    KeySpec{"public_decay.form", ValueType::kChoice, "reciprocal", kGenerate, "public place distance decay",
            "reciprocal|exponential|power"},
    KeySpec{"public_decay.d_min", ValueType::kDouble, "0.0001", kGenerate, "distance floor in degrees"},
    KeySpec{"public_decay.rate", ValueType::kDouble, "100", kGenerate, "exponential decay rate per degree"},
    KeySpec{"public_decay.exponent", ValueType::kDouble, "1", kGenerate, "power decay exponent"},
    KeySpec{"assign.nearest_n", ValueType::kUInt, "200", kGenerate, "weigh only the N nearest locations; 0 weighs all"},
    KeySpec{"adherence.min", ValueType::kDouble, "0", kGenerate, "smallest adherence value"},
    KeySpec{"adherence.max", ValueType::kDouble, "1", kGenerate, "largest adherence value"},
    KeySpec{"adherence.step", ValueType::kDouble, "0.1", kGenerate, "adherence is uniform over min, min+step, ..., max"},
    KeySpec{"essential_worker_rate", ValueType::kDouble, "0.05", kGenerate, "probability a worker is essential"},
    KeySpec{"public_transport_jobs", ValueType::kInt, "1", kGenerate, "value of the PublicTransport_Jobs column"},
    KeySpec{"batch_households", ValueType::kUInt, "4096", kGenerate, "households per synthesis batch"},

    KeySpec{"eval.population", ValueType::kPath, "", kEvaluate, "synthetic population CSV (--population overrides)"},
    KeySpec{"eval.individuals", ValueType::kPath, "", kEvaluate, "source microdata persons CSV (--microdata overrides)"},
    KeySpec{"eval.ks_columns", ValueType::kStringList, "Age,Height,Weight", kEvaluate, "numeric columns scored by 1 - KS"},
    KeySpec{"eval.chi2_columns", ValueType::kStringList, "SexLabel", kEvaluate, "categorical columns scored by chi-square p"},
    KeySpec{"eval.efficacy", ValueType::kBool, "true", kEvaluate, "run the train-on-synthetic regressions"},
    KeySpec{"eval.test_fraction", ValueType::kDouble, "0.3", kEvaluate, "share of source rows held out for testing"},
    KeySpec{"eval.max_synth_rows", ValueType::kUInt, "20000", kEvaluate, "synthetic training rows (seeded subsample)"},
    KeySpec{"eval.mlp.hidden", ValueType::kUInt, "32", kEvaluate, "MLP hidden units"},
    KeySpec{"eval.mlp.epochs", ValueType::kUInt, "60", kEvaluate, "MLP training epochs"},
    KeySpec{"eval.mlp.learning_rate", ValueType::kDouble, "0.01", kEvaluate, "MLP learning rate"},
    KeySpec{"eval.mlp.momentum", ValueType::kDouble, "0.9", kEvaluate, "MLP momentum"},
    KeySpec{"eval.mlp.batch_size", ValueType::kUInt, "32", kEvaluate, "MLP mini-batch size; 0 is full batch"},
    KeySpec{"eval.plots", ValueType::kBool, "true", kEvaluate, "write plot data CSVs"},
    KeySpec{"eval.histogram_bin_width", ValueType::kDouble, "5", kEvaluate, "histogram bin width"},
    KeySpec{"eval.scatter_cap", ValueType::kUInt, "10000", kEvaluate, "rows per scatter export"},

    KeySpec{"epi.population", ValueType::kPath, "", kSimulate, "synthetic population CSV (--population overrides)"},
    KeySpec{"epi.beta", ValueType::kBetaBands, "0:0.2,18:0.3,60:0.4", kSimulate, "age:rate bands of the per-tick transmission rate"},
    KeySpec{"epi.recovery_mean_days", ValueType::kDouble, "7", kSimulate, "mean infectious period"},
    KeySpec{"epi.tick_hours", ValueType::kDouble, "12", kSimulate, "tick length; must divide 24"},
    KeySpec{"epi.days", ValueType::kDouble, "180", kSimulate, "simulated days"},
    KeySpec{"epi.initial_infected", ValueType::kDouble, "10", kSimulate, "seed infections: count, or fraction if below 1"},
    KeySpec{"epi.lockdown_threshold", ValueType::kThresholdList, "none", kSimulate,
            "active-infected fraction that starts the lockdown; a list runs a sweep"},
    KeySpec{"epi.n_runs", ValueType::kUInt, "20", kSimulate, "replicates per scenario"},
    KeySpec{"epi.public_places", ValueType::kBool, "false", kSimulate, "add a public-place tick (needs tick_hours <= 8)"},
};
// clang-format on

[[noreturn]] void bad(const KeySpec& spec, std::string_view value, std::string_view expected) {
  throw InputError("key '" + std::string(spec.key) + "': '" + std::string(value) + "' is not " +
                   std::string(expected));
}

template <typename Fn>
void each_item(std::string_view list, Fn&& fn) {
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    const auto end = comma == std::string_view::npos ? list.size() : comma;
    fn(trim(list.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

}  // namespace

std::span<const KeySpec> schema() { return kSchema; }

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : kSchema) {
    if (k.key == key) return &k;
  }
  return nullptr;
}

std::string_view type_name(ValueType type) {
  switch (type) {
    case ValueType::kString: return "string";
    case ValueType::kPath: return "path";
    case ValueType::kInt: return "int";
    case ValueType::kUInt: return "uint";
    case ValueType::kDouble: return "number";
    case ValueType::kBool: return "bool";
    case ValueType::kChoice: return "choice";
    case ValueType::kIntList: return "int list";
    case ValueType::kStringList: return "string list";
    case ValueType::kThresholdList: return "threshold list";
    case ValueType::kBetaBands: return "age:beta list";
  }
  return "string";
}

void check_value(const KeySpec& spec, std::string_view raw) {
  const auto v = trim(raw);
  switch (spec.type) {
    case ValueType::kString:
    case ValueType::kPath:
      return;
    case ValueType::kInt:
      if (!parse_int<long long>(v)) bad(spec, v, "an integer");
      return;
    case ValueType::kUInt:
      if (auto x = parse_int<long long>(v); !x || *x < 0) bad(spec, v, "a non-negative integer");
      return;
    case ValueType::kDouble:
      if (auto x = parse_double(v); !x || !std::isfinite(*x)) bad(spec, v, "a finite number");
      return;
    case ValueType::kBool:
      if (v != "true" && v != "false" && v != "1" && v != "0") bad(spec, v, "a boolean (true/false)");
      return;
    case ValueType::kChoice: {
      bool ok = false;
      std::string_view choices = spec.choices;
      std::size_t start = 0;
      while (start <= choices.size()) {
        const auto bar = choices.find('|', start);
        const auto end = bar == std::string_view::npos ? choices.size() : bar;
        if (choices.substr(start, end - start) == v) ok = true;
        if (bar == std::string_view::npos) break;
        start = bar + 1;
      }
      if (!ok) bad(spec, v, "one of " + std::string(spec.choices));
      return;
    }
    case ValueType::kIntList:
      each_item(v, [&](std::string_view item) {
        if (!parse_int<int>(item)) bad(spec, v, "a comma-separated list of integers");
      });
      return;
    case ValueType::kStringList:
      each_item(v, [&](std::string_view item) {
        if (item.empty()) bad(spec, v, "a comma-separated list of names");
      });
      return;
    case ValueType::kThresholdList:
      each_item(v, [&](std::string_view item) {
        if (item == "none") return;
        const auto x = parse_double(item);
        if (!x || !(*x > 0.0 && *x < 1.0)) bad(spec, v, "a list of fractions in (0, 1) or 'none'");
      });
      return;
    case ValueType::kBetaBands:
      each_item(v, [&](std::string_view item) {
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) bad(spec, v, "a list of age:beta pairs");
        const auto age = parse_int<int>(item.substr(0, colon));
        const auto beta = parse_double(item.substr(colon + 1));
        if (!age || *age < 0 || !beta || !(*beta >= 0.0)) bad(spec, v, "a list of age:beta pairs");
      });
      return;
  }
}

std::string schema_help(unsigned command) {
  std::string out = "Config keys (key = value; '#' comments; include = <file>):\n";
  std::size_t width = 0;
  for (const auto& k : kSchema) {
    if (k.commands & command) width = std::max(width, k.key.size());
  }
  for (const auto& k : kSchema) {
    if (!(k.commands & command)) continue;
    std::string line = "  " + std::string(k.key);
    line.append(width + 2 - k.key.size(), ' ');
    line += std::string(k.help) + " [" + std::string(type_name(k.type));
    if (!k.choices.empty()) line += ": " + std::string(k.choices);
    if (!k.default_value.empty()) line += ", default " + std::string(k.default_value);
    line += "]\n";
    out += line;
  }
  return out;
}

}  // namespace synthpop::config
