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

#include "synthpop/eval/evaluate.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/eval/metrics.hpp"
#include "synthpop/eval/plots.hpp"
#include "synthpop/io/population.hpp"

namespace synthpop::eval {

namespace fs = std::filesystem;

std::string source_column(const std::string& c, const io::MicroSchema& s) {
  static const std::map<std::string, std::string io::MicroSchema::*> kFields = {
      {"Age", &io::MicroSchema::age},           {"SexLabel", &io::MicroSchema::sex},
      {"Height", &io::MicroSchema::height},     {"Weight", &io::MicroSchema::weight},
      {"Religion", &io::MicroSchema::religion}, {"Caste", &io::MicroSchema::caste},
      {"JobLabel", &io::MicroSchema::job_label}, {"JobID", &io::MicroSchema::job_id},
      {"HHID", &io::MicroSchema::household_id}, {"Agent_ID", &io::MicroSchema::person_id},
      {"PSUID", &io::MicroSchema::psu_id}};
  const auto it = kFields.find(c);
  return it == kFields.end() ? c : s.*(it->second);
}

namespace {

using Columns = std::unordered_map<std::string, std::vector<std::string>>;

std::vector<double> numeric(const std::vector<std::string>& raw, const std::string& name, const fs::path& file) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (is_missing_token(raw[i])) {
      out[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto v = parse_double(raw[i]);
    if (!v) {
      throw InputError(file.string() + ": column '" + name + "' row " + std::to_string(i + 2) +
                       ": not a number: '" + raw[i] + "'");
    }
    out[i] = *v;
  }
  return out;
}

std::vector<double> present(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) {
    if (!std::isnan(x)) out.push_back(x);
  }
  return out;
}

std::vector<std::string> present(const std::vector<std::string>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!is_missing_token(x)) out.push_back(std::string(trim(x)));
  }
  return out;
}

BodyTable body_table(const std::vector<double>& age, const std::vector<std::string>& sex,
                     const std::vector<double>& height, const std::vector<double>& weight) {
  BodyTable t;
  for (std::size_t i = 0; i < age.size(); ++i) {
    if (std::isnan(age[i]) || std::isnan(height[i]) || std::isnan(weight[i]) || is_missing_token(sex[i])) continue;
    t.push(age[i], std::string(trim(sex[i])), height[i], weight[i]);
  }
  return t;
}

}  // namespace

EvalReport evaluate(const EvalConfig& cfg) {
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) throw InputError("eval.test_fraction must be in (0, 1)");
  if (cfg.max_synth_rows < 1) throw InputError("eval.max_synth_rows must be >= 1");
  if (cfg.out_dir.empty()) throw InputError("no output directory given");

  // Columns needed from each file, population names first.
  std::vector<std::string> synth_names;
  auto want = [&](const std::string& c) {
    if (std::find(synth_names.begin(), synth_names.end(), c) == synth_names.end()) synth_names.push_back(c);
  };
  for (const auto& c : cfg.ks_columns) want(c);
  for (const auto& c : cfg.chi2_columns) want(c);
  if (cfg.efficacy) {
    for (const char* c : {"Age", "SexLabel", "Height", "Weight"}) want(c);
  }
  std::vector<std::string> real_names;
  for (const auto& c : synth_names) real_names.push_back(source_column(c, cfg.schema));

  const auto synth_cols = io::read_columns(cfg.population, synth_names);
  const auto real_cols = io::read_columns(cfg.individuals, real_names);

  EvalReport report;
  report.synth_rows = synth_cols.empty() ? 0 : synth_cols.begin()->second.size();
  report.real_rows = real_cols.empty() ? 0 : real_cols.begin()->second.size();

  NumericTable real_num;
  NumericTable synth_num;
  for (std::size_t k = 0; k < synth_names.size(); ++k) {
    const auto& c = synth_names[k];
    const bool needs_numeric = std::find(cfg.ks_columns.begin(), cfg.ks_columns.end(), c) != cfg.ks_columns.end() ||
                               (cfg.efficacy && (c == "Age" || c == "Height" || c == "Weight"));
    if (!needs_numeric) continue;
    synth_num[c] = numeric(synth_cols.at(c), c, cfg.population);
    real_num[c] = numeric(real_cols.at(real_names[k]), real_names[k], cfg.individuals);
  }

  for (const auto& c : cfg.ks_columns) {
    const auto r = present(real_num.at(c));
    const auto s = present(synth_num.at(c));
    if (r.empty() || s.empty()) throw InputError("column '" + c + "' has no values to compare");
    report.ks_scores.emplace_back(c, ks_score(r, s));
  }
  for (const auto& c : cfg.chi2_columns) {
    const auto r = present(real_cols.at(source_column(c, cfg.schema)));
    const auto s = present(synth_cols.at(c));
    report.chi2_pvalues.emplace_back(c, chi_square_pvalue(r, s));
  }

  if (cfg.efficacy) {
    const auto& sex_real = real_cols.at(source_column("SexLabel", cfg.schema));
    const auto& sex_synth = synth_cols.at("SexLabel");
    const auto real = body_table(real_num.at("Age"), sex_real, real_num.at("Height"), real_num.at("Weight"));
    const auto synth = body_table(synth_num.at("Age"), sex_synth, synth_num.at("Height"), synth_num.at("Weight"));
    if (real.size() < 4) throw InputError("too few complete source rows for the efficacy regressions");
    if (synth.size() < 2) throw InputError("too few complete synthetic rows for the efficacy regressions");

    std::vector<std::size_t> order(real.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng split_rng = make_rng(cfg.rng_seed, Stream::kEvalSplit);
    shuffle(order.begin(), order.end(), split_rng);
    const auto n_test = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(cfg.test_fraction * static_cast<double>(real.size()))));
    const std::vector<std::size_t> test_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    const std::vector<std::size_t> train_rows(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    const auto real_train = real.subset(train_rows);
    const auto real_test = real.subset(test_rows);
    const auto synth_train = synth.subset(subsample(synth.size(), cfg.max_synth_rows, cfg.rng_seed));
    report.real_train_rows = real_train.size();
    report.real_test_rows = real_test.size();
    report.synth_train_rows = synth_train.size();

    MlpOptions mlp = cfg.mlp;
    mlp.seed = cfg.rng_seed;
    for (const auto target : {Target::kWeight, Target::kHeight}) {
      for (const auto model : {ModelKind::kLinear, ModelKind::kMlp}) {
        report.efficacy.push_back({target, model, ml_efficacy(real_train, real_test, synth_train, target, model, mlp)});
      }
    }
  }

  fs::create_directories(cfg.out_dir);
  {
    std::ofstream out(cfg.out_dir / "report.txt", std::ios::binary);
    out << format_report(report);
    if (!out) throw PipelineError("cannot write " + (cfg.out_dir / "report.txt").string());
  }
  if (cfg.plots) {
    PlotOptions po;
    po.bin_width = cfg.histogram_bin_width;
    po.scatter_cap = cfg.scatter_cap;
    po.seed = cfg.rng_seed;
    export_plot_data(real_num, synth_num, cfg.ks_columns, cfg.out_dir / "plots", po);
    // Home locations for a map of the synthetic population; skipped when the
    // file being evaluated carries no coordinates.
    const CsvReader probe(cfg.population);
    if (probe.column("H_Lat") && probe.column("H_Lon")) {
      const std::vector<std::string> geo = {"H_Lat", "H_Lon"};
      const auto homes = io::read_columns(cfg.population, geo);
      write_scatter(numeric(homes.at("H_Lat"), "H_Lat", cfg.population),
                    numeric(homes.at("H_Lon"), "H_Lon", cfg.population), "H_Lat", "H_Lon", cfg.scatter_cap,
                    cfg.rng_seed, cfg.out_dir / "plots" / "homes.csv");
    }
  }
  return report;
}

std::string format_report(const EvalReport& r) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
  out += "# synthetic population evaluation report\n";
  line("format", "synthpop.eval_report");
  line("version", "1");
  line("rows.real", std::to_string(r.real_rows));
  line("rows.synth", std::to_string(r.synth_rows));
  line("rows.real_train", std::to_string(r.real_train_rows));
  line("rows.real_test", std::to_string(r.real_test_rows));
  line("rows.synth_train", std::to_string(r.synth_train_rows));
  for (const auto& [c, v] : r.ks_scores) line("ks." + c, format_fixed(v, 6));
  for (const auto& [c, v] : r.chi2_pvalues) line("chi2_p." + c, format_fixed(v, 6));
  for (const auto& e : r.efficacy) {
    const std::string key = "efficacy." + std::string(target_name(e.target)) + "." + std::string(model_name(e.model));
    line(key + ".real_trained", format_fixed(e.score.real_trained, 6));
    line(key + ".synth_trained", format_fixed(e.score.synth_trained, 6));
    line(key + ".gap", format_fixed(e.score.gap(), 6));
  }
  return out;
}

}  // namespace synthpop::eval
