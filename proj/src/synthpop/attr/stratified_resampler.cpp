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

#include "synthpop/attr/stratified_resampler.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "synthpop/common/error.hpp"

namespace synthpop::attr {

namespace {

constexpr std::string_view kFormat = "synthpop.stratified_resampler";
constexpr int kVersion = 1;

void moments(const std::vector<StratifiedResampler::Row>& rows, const std::vector<std::size_t>& pool, bool height,
             double& mean, double& stddev) {
  mean = 0.0;
  stddev = 0.0;
  if (pool.empty()) return;
  for (auto r : pool) mean += height ? *rows[r].height : *rows[r].weight;
  mean /= static_cast<double>(pool.size());
  double ss = 0.0;
  for (auto r : pool) {
    const double d = (height ? *rows[r].height : *rows[r].weight) - mean;
    ss += d * d;
  }
  stddev = std::sqrt(ss / static_cast<double>(pool.size()));
}

}  // namespace

StratifiedResampler::StratifiedResampler(ResamplerOptions options) : options_(std::move(options)) {
  if (!(options_.jitter_scale >= 0.0)) throw InputError("jitter scale must be >= 0");
  if (options_.min_stratum_size < 1) throw InputError("minimum stratum size must be >= 1");
}

StratifiedResampler::Boundaries StratifiedResampler::merge_bins(
    const std::vector<std::vector<std::size_t>>& rows_by_bin) const {
  Boundaries groups;
  std::vector<std::size_t> sizes;
  for (std::size_t b = 0; b < rows_by_bin.size(); ++b) {
    groups.emplace_back(b, b);
    sizes.push_back(rows_by_bin[b].size());
  }
  while (groups.size() > 1) {
    std::size_t smallest = 0;
    for (std::size_t g = 1; g < groups.size(); ++g) {
      if (sizes[g] < sizes[smallest]) smallest = g;
    }
    if (sizes[smallest] >= options_.min_stratum_size) break;
    std::size_t other;
    if (smallest == 0) {
      other = 1;
    } else if (smallest + 1 == groups.size()) {
      other = smallest - 1;
    } else {
      other = sizes[smallest - 1] <= sizes[smallest + 1] ? smallest - 1 : smallest + 1;
    }
    const std::size_t lo = std::min(smallest, other);
    groups[lo] = {groups[lo].first, groups[lo + 1].second};
    sizes[lo] += sizes[lo + 1];
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
    sizes.erase(sizes.begin() + static_cast<std::ptrdiff_t>(lo) + 1);
  }
  return groups;
}

std::vector<StratifiedResampler::Stratum> StratifiedResampler::make_strata(
    const std::vector<std::vector<std::size_t>>& rows_by_bin, const Boundaries& bounds) const {
  std::vector<Stratum> out;
  for (const auto& [first, last] : bounds) {
    Stratum s;
    s.first_bin = first;
    s.last_bin = last;
    for (std::size_t b = first; b <= last; ++b) {
      s.rows.insert(s.rows.end(), rows_by_bin[b].begin(), rows_by_bin[b].end());
    }
    for (auto r : s.rows) {
      if (rows_[r].height) s.height_pool.push_back(r);
      if (rows_[r].weight) s.weight_pool.push_back(r);
    }
    moments(rows_, s.height_pool, true, s.height_mean, s.height_std);
    moments(rows_, s.weight_pool, false, s.weight_mean, s.weight_std);
    out.push_back(std::move(s));
  }
  return out;
}

void StratifiedResampler::group_rows(std::map<std::string, std::vector<std::vector<std::size_t>>>& by_sex_bin,
                                     std::vector<std::vector<std::size_t>>& pooled_bins) const {
  const std::size_t nbins = options_.age_bins.size();
  pooled_bins.assign(nbins, {});
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto b = options_.age_bins.index(rows_[r].age);
    auto& bins = by_sex_bin[rows_[r].sex];
    bins.resize(nbins);
    bins[b].push_back(r);
    pooled_bins[b].push_back(r);
  }
}

void StratifiedResampler::index_rows(const std::map<std::string, Boundaries>& sex_bounds,
                                     const Boundaries& pooled_bounds) {
  const std::size_t nbins = options_.age_bins.size();
  std::map<std::string, std::vector<std::vector<std::size_t>>> by_sex_bin;
  std::vector<std::vector<std::size_t>> pooled_bins;
  group_rows(by_sex_bin, pooled_bins);
  all_height_.clear();
  all_weight_.clear();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].height) all_height_.push_back(r);
    if (rows_[r].weight) all_weight_.push_back(r);
  }
  auto check = [nbins](const Boundaries& b) {
    std::size_t expect = 0;
    for (const auto& [first, last] : b) {
      if (first != expect || last < first || last >= nbins) throw InputError("resampler strata do not tile the age bins");
      expect = last + 1;
    }
    if (expect != nbins) throw InputError("resampler strata do not tile the age bins");
  };
  for (const auto& [sex, b] : sex_bounds) check(b);
  check(pooled_bounds);

  auto lookup = [nbins](const std::vector<Stratum>& strata) {
    std::vector<std::size_t> map(nbins, 0);
    for (std::size_t s = 0; s < strata.size(); ++s) {
      for (std::size_t b = strata[s].first_bin; b <= strata[s].last_bin; ++b) map[b] = s;
    }
    return map;
  };

  by_sex_.clear();
  bin_to_stratum_.clear();
  for (const auto& [sex, bins] : by_sex_bin) {
    const auto it = sex_bounds.find(sex);
    if (it == sex_bounds.end()) throw InputError("resampler strata missing for sex '" + sex + "'");
    by_sex_[sex] = make_strata(bins, it->second);
    bin_to_stratum_[sex] = lookup(by_sex_[sex]);
  }
  pooled_ = make_strata(pooled_bins, pooled_bounds);
  pooled_bin_to_stratum_ = lookup(pooled_);
}

void StratifiedResampler::fit(const io::MicroSample& sample) {
  if (sample.persons.empty()) throw InputError("cannot fit attribute generator on an empty training set");
  rows_.clear();
  rows_.reserve(sample.persons.size());
  for (const auto& p : sample.persons) {
    rows_.push_back(Row{p.age, p.sex, p.height, p.weight, p.comorbidities});
  }
  std::map<std::string, std::vector<std::vector<std::size_t>>> by_sex_bin;
  std::vector<std::vector<std::size_t>> pooled_bins;
  group_rows(by_sex_bin, pooled_bins);
  std::map<std::string, Boundaries> sex_bounds;
  for (const auto& [sex, bins] : by_sex_bin) sex_bounds[sex] = merge_bins(bins);
  index_rows(sex_bounds, merge_bins(pooled_bins));
}

const StratifiedResampler::Stratum& StratifiedResampler::stratum_for(int age, std::string_view sex) const {
  if (!fitted()) throw PipelineError("attribute generator used before fit");
  const auto bin = options_.age_bins.index(age);
  if (const auto it = by_sex_.find(std::string(sex)); it != by_sex_.end()) {
    return it->second[bin_to_stratum_.at(it->first)[bin]];
  }
  return pooled_[pooled_bin_to_stratum_[bin]];
}

double StratifiedResampler::jittered(double value, double stddev, Rng& rng) const {
  const double sigma = options_.jitter_scale * stddev;
  if (sigma <= 0.0) return value;
  for (int attempt = 0; attempt < 32; ++attempt) {
    const double v = value + sigma * standard_normal(rng);
    if (v > 0.0) return v;
  }
  return value;
}

AttributeDraw StratifiedResampler::sample(int age, std::string_view sex, Rng& rng) const {
  const Stratum& s = stratum_for(age, sex);
  const Stratum& pooled = pooled_[pooled_bin_to_stratum_[options_.age_bins.index(age)]];
  AttributeDraw d;
  d.donor = s.rows[uniform_index(rng, s.rows.size())];
  const Row& donor = rows_[d.donor];
  d.comorbidities = donor.comorbidities;

  auto pick = [&](bool height) -> std::optional<std::size_t> {
    if (height ? donor.height.has_value() : donor.weight.has_value()) return d.donor;
    for (const auto* pool : {height ? &s.height_pool : &s.weight_pool, height ? &pooled.height_pool : &pooled.weight_pool,
                             height ? &all_height_ : &all_weight_}) {
      if (!pool->empty()) return (*pool)[uniform_index(rng, pool->size())];
    }
    return std::nullopt;
  };

  d.height_donor = pick(true);
  d.weight_donor = pick(false);
  if (d.height_donor) d.height = jittered(*rows_[*d.height_donor].height, s.height_std, rng);
  if (d.weight_donor) d.weight = jittered(*rows_[*d.weight_donor].weight, s.weight_std, rng);
  return d;
}

void StratifiedResampler::save(const std::filesystem::path& path) const {
  using nlohmann::json;
  if (!fitted()) throw PipelineError("cannot save an unfitted attribute generator");
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["options"] = {{"jitter_scale", options_.jitter_scale},
                    {"min_stratum_size", options_.min_stratum_size},
                    {"age_bin_edges", options_.age_bins.edges()}};
  json rows = json::array();
  for (const auto& r : rows_) {
    json flags = json::array();
    for (bool f : r.comorbidities) flags.push_back(f ? 1 : 0);
    rows.push_back({{"age", r.age},
                    {"sex", r.sex},
                    {"height", r.height ? json(*r.height) : json(nullptr)},
                    {"weight", r.weight ? json(*r.weight) : json(nullptr)},
                    {"flags", flags}});
  }
  doc["rows"] = std::move(rows);
  auto bounds = [](const std::vector<Stratum>& strata) {
    json b = json::array();
    for (const auto& s : strata) b.push_back({s.first_bin, s.last_bin});
    return b;
  };
  json strata = json::object();
  for (const auto& [sex, list] : by_sex_) strata[sex] = bounds(list);
  doc["strata"] = std::move(strata);
  doc["pooled_strata"] = bounds(pooled_);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PipelineError("cannot open '" + path.string() + "' for writing");
  out << doc.dump(1) << '\n';
  if (!out) throw PipelineError("write to '" + path.string() + "' failed");
}

StratifiedResampler StratifiedResampler::load(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file '" + path.string() + "'");
  try {
    const json doc = json::parse(in);
    if (doc.at("format").get<std::string>() != kFormat) throw InputError("not a stratified resampler file");
    if (doc.at("version").get<int>() != kVersion) {
      throw InputError("unsupported resampler file version " + std::to_string(doc.at("version").get<int>()));
    }
    ResamplerOptions opt;
    opt.jitter_scale = doc.at("options").at("jitter_scale").get<double>();
    opt.min_stratum_size = doc.at("options").at("min_stratum_size").get<std::size_t>();
    opt.age_bins = AgeBins(doc.at("options").at("age_bin_edges").get<std::vector<int>>());
    StratifiedResampler g(opt);
    for (const auto& r : doc.at("rows")) {
      Row row;
      row.age = r.at("age").get<int>();
      row.sex = r.at("sex").get<std::string>();
      if (!r.at("height").is_null()) row.height = r.at("height").get<double>();
      if (!r.at("weight").is_null()) row.weight = r.at("weight").get<double>();
      const auto& flags = r.at("flags");
      if (flags.size() != io::kComorbidityCount) throw InputError("resampler row has wrong flag count");
      for (std::size_t k = 0; k < io::kComorbidityCount; ++k) row.comorbidities[k] = flags[k].get<int>() != 0;
      g.rows_.push_back(std::move(row));
    }
    if (g.rows_.empty()) throw InputError("resampler file has no rows");
    auto read_bounds = [](const json& j) {
      Boundaries b;
      for (const auto& pair : j) b.emplace_back(pair.at(0).get<std::size_t>(), pair.at(1).get<std::size_t>());
      return b;
    };
    std::map<std::string, Boundaries> sex_bounds;
    for (const auto& [sex, list] : doc.at("strata").items()) sex_bounds[sex] = read_bounds(list);
    g.index_rows(sex_bounds, read_bounds(doc.at("pooled_strata")));
    return g;
  } catch (const json::exception& e) {
    throw InputError("'" + path.string() + "': malformed resampler file: " + e.what());
  }
}

}  // namespace synthpop::attr
