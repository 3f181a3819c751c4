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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "synthpop/attr/conditional_generator.hpp"

namespace synthpop::attr {

struct ResamplerOptions {
  double jitter_scale = 0.1;      // fraction of the stratum standard deviation
  std::size_t min_stratum_size = 20;
  AgeBins age_bins;               // 5-year bins, 85+
};

// Reference ConditionalGenerator: resamples donor rows from the (age bin, sex)
// stratum and perturbs height and weight with truncated Gaussian jitter.
// Strata smaller than min_stratum_size are merged with a neighbouring age bin
// of the same sex until every stratum is large enough (or the sex has no more
// bins to merge). Unknown sexes fall back to strata pooled over all sexes.
class StratifiedResampler final : public ConditionalGenerator {
 public:
  struct Row {
    int age = 0;
    std::string sex;
    std::optional<double> height;
    std::optional<double> weight;
    io::Comorbidities comorbidities{};
  };

  // Contiguous run of age bins sharing one pool of donors.
  struct Stratum {
    std::size_t first_bin = 0;
    std::size_t last_bin = 0;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> height_pool;
    std::vector<std::size_t> weight_pool;
    double height_std = 0.0;
    double weight_std = 0.0;
    double height_mean = 0.0;
    double weight_mean = 0.0;
  };

  explicit StratifiedResampler(ResamplerOptions options = {});

  void fit(const io::MicroSample& sample) override;
  AttributeDraw sample(int age, std::string_view sex, Rng& rng) const override;

  // The stratum used for (age, sex); falls back to the pooled strata.
  const Stratum& stratum_for(int age, std::string_view sex) const;
  const std::map<std::string, std::vector<Stratum>>& strata() const { return by_sex_; }
  const std::vector<Stratum>& pooled() const { return pooled_; }
  const std::vector<Row>& rows() const { return rows_; }
  const ResamplerOptions& options() const { return options_; }
  bool fitted() const { return !rows_.empty(); }

  // Single JSON document, format "synthpop.stratified_resampler" version 1:
  // options, training rows and the merged strata with their moments.
  void save(const std::filesystem::path& path) const;
  static StratifiedResampler load(const std::filesystem::path& path);

 private:
  using Boundaries = std::vector<std::pair<std::size_t, std::size_t>>;

  Boundaries merge_bins(const std::vector<std::vector<std::size_t>>& rows_by_bin) const;
  std::vector<Stratum> make_strata(const std::vector<std::vector<std::size_t>>& rows_by_bin,
                                   const Boundaries& bounds) const;
  void group_rows(std::map<std::string, std::vector<std::vector<std::size_t>>>& by_sex_bin,
                  std::vector<std::vector<std::size_t>>& pooled_bins) const;
  void index_rows(const std::map<std::string, Boundaries>& sex_bounds, const Boundaries& pooled_bounds);
  double jittered(double value, double stddev, Rng& rng) const;

  ResamplerOptions options_;
  std::vector<Row> rows_;
  std::map<std::string, std::vector<Stratum>> by_sex_;
  std::map<std::string, std::vector<std::size_t>> bin_to_stratum_;  // by sex, indexed by bin
  std::vector<Stratum> pooled_;
  std::vector<std::size_t> pooled_bin_to_stratum_;
  std::vector<std::size_t> all_height_;
  std::vector<std::size_t> all_weight_;
};

}  // namespace synthpop::attr
