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

#include "synthpop/attr/job_table.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "synthpop/common/error.hpp"

namespace synthpop::attr {

namespace {

bool is_special(std::string_view label) { return label == kHomeboundLabel || label == kStudentLabel; }

const Job& pick(const std::vector<JobEntry>& entries, const std::vector<double>& cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  auto i = static_cast<std::size_t>(it - cumulative.begin());
  // Skip zero-weight entries that share the same cumulative value.
  while (entries[i].weight <= 0.0 && i + 1 < entries.size()) ++i;
  return entries[i].job;
}

}  // namespace

JobTable::JobTable(std::vector<JobEntry> entries) : entries_(std::move(entries)) {
  for (const auto& special : {Job{std::string(kHomeboundLabel), kHomeboundId}, Job{std::string(kStudentLabel), kStudentId}}) {
    if (!find(special.label)) entries_.push_back({special, 0.0});
  }
  double total = 0.0;
  double wp_total = 0.0;
  for (const auto& e : entries_) {
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) throw InputError("job weight must be >= 0");
    total += e.weight;
    cumulative_.push_back(total);
    if (!is_special(e.job.label)) wp_total += e.weight;
    workplace_cumulative_.push_back(wp_total);
  }
  if (!(total > 0.0)) throw InputError("job table has no positive weight");
}

JobTable JobTable::from_microdata(const io::MicroSample& sample) {
  std::map<std::string, std::pair<double, std::optional<int>>> counts;
  int max_id = kStudentId;
  for (const auto& p : sample.persons) {
    if (p.job_id) max_id = std::max(max_id, *p.job_id);
    if (p.age < kAdultAge || !p.job_label) continue;
    auto& [n, id] = counts[*p.job_label];
    n += 1.0;
    if (!id && p.job_id) id = p.job_id;
  }
  if (counts.empty()) throw InputError("microdata has no job labels for persons aged 18 or over");
  std::vector<JobEntry> entries;
  for (auto& [label, value] : counts) {
    int id;
    if (label == kHomeboundLabel) {
      id = kHomeboundId;
    } else if (label == kStudentLabel) {
      id = kStudentId;
    } else {
      id = value.second ? *value.second : ++max_id;
    }
    entries.push_back({Job{label, id}, value.first});
  }
  return JobTable(std::move(entries));
}

const JobEntry* JobTable::find(std::string_view label) const {
  for (const auto& e : entries_) {
    if (e.job.label == label) return &e;
  }
  return nullptr;
}

const Job& JobTable::draw(Rng& rng) const { return pick(entries_, cumulative_, rng); }

const Job& JobTable::draw_workplace_type(Rng& rng) const {
  if (workplace_cumulative_.empty() || !(workplace_cumulative_.back() > 0.0)) {
    throw PipelineError("job table has no workplace job types");
  }
  const double u = uniform01(rng) * workplace_cumulative_.back();
  auto it = std::upper_bound(workplace_cumulative_.begin(), workplace_cumulative_.end(), u);
  if (it == workplace_cumulative_.end()) --it;
  auto i = static_cast<std::size_t>(it - workplace_cumulative_.begin());
  while ((is_special(entries_[i].job.label) || entries_[i].weight <= 0.0) && i + 1 < entries_.size()) ++i;
  return entries_[i].job;
}

Job assign_job(int age, const JobTable& table, Rng& rng) {
  if (age < kStudentAge) return {std::string(kHomeboundLabel), kHomeboundId};
  if (age < kAdultAge) return {std::string(kStudentLabel), kStudentId};
  return table.draw(rng);
}

}  // namespace synthpop::attr
