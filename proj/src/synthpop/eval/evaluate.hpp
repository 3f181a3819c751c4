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
#include <string>
#include <vector>

#include "synthpop/eval/efficacy.hpp"
#include "synthpop/io/microdata.hpp"

namespace synthpop::eval {

struct EvalConfig {
  std::filesystem::path population;   // synthetic population CSV
  std::filesystem::path individuals;  // source microdata persons
  io::MicroSchema schema;             // column names in the source file

  // Population column names; the matching source column is found through the
  // schema (Age -> schema.age, SexLabel -> schema.sex, ...), other names are
  // used verbatim.
  std::vector<std::string> ks_columns = {"Age", "Height", "Weight"};
  std::vector<std::string> chi2_columns = {"SexLabel"};

  double test_fraction = 0.3;
  std::size_t max_synth_rows = 20000;
  MlpOptions mlp;
  bool efficacy = true;

  bool plots = true;
  double histogram_bin_width = 5.0;
  std::size_t scatter_cap = 10000;

  std::uint64_t rng_seed = 1;
  std::filesystem::path out_dir;
};

struct EfficacyEntry {
  Target target;
  ModelKind model;
  EfficacyScore score;
};

struct EvalReport {
  std::size_t real_rows = 0;
  std::size_t synth_rows = 0;
  std::size_t real_train_rows = 0;
  std::size_t real_test_rows = 0;
  std::size_t synth_train_rows = 0;
  std::vector<std::pair<std::string, double>> ks_scores;
  std::vector<std::pair<std::string, double>> chi2_pvalues;
  std::vector<EfficacyEntry> efficacy;
};

std::string source_column(const std::string& population_column, const io::MicroSchema& schema);

// Loads both files, computes the metrics, writes report.txt (and plot data
// under plots/ when enabled) into config.out_dir. Column problems raise
// InputError naming the column.
EvalReport evaluate(const EvalConfig& config);

// `key = value` lines in a fixed order, values with six decimals.
std::string format_report(const EvalReport& report);

}  // namespace synthpop::eval
