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

#include "synthpop/io/microdata.hpp"

#include <algorithm>
#include <unordered_map>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::io {
namespace {

std::optional<double> read_measure(const CsvReader& r, std::size_t col, double max) {
  const auto cell = r[col];
  if (is_missing_token(cell)) return std::nullopt;
  const auto v = parse_double(cell);
  if (!v) r.fail(col, "not a number: '" + std::string(cell) + "'");
  if (*v <= 0.0 || *v > max) r.fail(col, "value " + std::string(trim(cell)) + " outside (0, " + format_double(max) + "]");
  return v;
}

bool read_flag(const CsvReader& r, std::size_t col) {
  const auto cell = trim(r[col]);
  if (is_missing_token(cell) || cell == "0" || cell == "false" || cell == "no") return false;
  if (cell == "1" || cell == "true" || cell == "yes") return true;
  const auto v = parse_double(cell);
  if (!v) r.fail(col, "not a flag: '" + std::string(cell) + "'");
  return *v != 0.0;
}

}  // namespace

MicroSample load_microdata(const std::filesystem::path& individuals, const std::filesystem::path& households,
                           const MicroSchema& schema) {
  MicroSample sample;
  std::unordered_map<std::string, std::size_t> hh_index;

  {
    CsvReader r(households);
    const auto c_id = r.require_column(schema.household_id);
    const auto c_psu = r.column(schema.psu_id);
    const auto c_rel = r.column(schema.religion);
    const auto c_caste = r.column(schema.caste);
    const auto c_size = r.column(schema.household_size);
    std::vector<std::optional<int>> declared_size;
    while (r.next()) {
      std::string id(trim(r[c_id]));
      if (id.empty()) r.fail(c_id, "empty household id");
      if (!hh_index.emplace(id, sample.households.size()).second) r.fail(c_id, "duplicate household id '" + id + "'");
      MicroHousehold hh;
      hh.household_id = std::move(id);
      if (c_psu) hh.psu_id = std::string(trim(r[*c_psu]));
      if (c_rel && !is_missing_token(r[*c_rel])) hh.religion = std::string(trim(r[*c_rel]));
      if (c_caste && !is_missing_token(r[*c_caste])) hh.caste = std::string(trim(r[*c_caste]));
      std::optional<int> size;
      if (c_size && !is_missing_token(r[*c_size])) {
        size = parse_int<int>(r[*c_size]);
        if (!size || *size < 1) r.fail(*c_size, "household size must be an integer >= 1");
      }
      declared_size.push_back(size);
      sample.households.push_back(std::move(hh));
    }

    CsvReader p(individuals);
    const auto c_pid = p.require_column(schema.person_id);
    const auto c_hh = p.require_column(schema.household_id);
    const auto c_age = p.require_column(schema.age);
    const auto c_sex = p.require_column(schema.sex);
    const auto c_prel = p.column(schema.religion);
    const auto c_pcaste = p.column(schema.caste);
    const auto c_height = p.column(schema.height);
    const auto c_weight = p.column(schema.weight);
    const auto c_job = p.column(schema.job_label);
    const auto c_jobid = p.column(schema.job_id);
    std::array<std::optional<std::size_t>, kComorbidityCount> c_flags;
    for (std::size_t k = 0; k < kComorbidityCount; ++k) c_flags[k] = p.column(kComorbidityColumns[k]);

    std::vector<std::string> unresolved;
    while (p.next()) {
      MicroPerson person;
      person.person_id = std::string(trim(p[c_pid]));
      person.household_id = std::string(trim(p[c_hh]));
      const auto age = parse_int<int>(p[c_age]);
      if (!age) p.fail(c_age, "not an integer: '" + std::string(p[c_age]) + "'");
      if (*age < 0 || *age > schema.max_age) p.fail(c_age, "age " + std::to_string(*age) + " out of range");
      person.age = *age;
      person.sex = std::string(trim(p[c_sex]));
      if (person.sex.empty()) p.fail(c_sex, "missing sex");
      if (c_prel) person.religion = std::string(trim(p[*c_prel]));
      if (c_pcaste) person.caste = std::string(trim(p[*c_pcaste]));
      if (c_height) person.height = read_measure(p, *c_height, schema.max_height);
      if (c_weight) person.weight = read_measure(p, *c_weight, schema.max_weight);
      if (c_job && !is_missing_token(p[*c_job])) person.job_label = std::string(trim(p[*c_job]));
      if (c_jobid && !is_missing_token(p[*c_jobid])) {
        person.job_id = parse_int<int>(p[*c_jobid]);
        if (!person.job_id) p.fail(*c_jobid, "not an integer: '" + std::string(p[*c_jobid]) + "'");
      }
      for (std::size_t k = 0; k < kComorbidityCount; ++k) {
        if (c_flags[k]) person.comorbidities[k] = read_flag(p, *c_flags[k]);
      }

      const auto it = hh_index.find(person.household_id);
      if (it == hh_index.end()) {
        if (std::find(unresolved.begin(), unresolved.end(), person.household_id) == unresolved.end()) {
          unresolved.push_back(person.household_id);
        }
        continue;
      }
      auto& hh = sample.households[it->second];
      if (person.religion.empty() && hh.religion) person.religion = *hh.religion;
      if (person.caste.empty() && hh.caste) person.caste = *hh.caste;
      hh.members.push_back(sample.persons.size());
      sample.persons.push_back(std::move(person));
    }

    if (!unresolved.empty()) {
      std::string msg = "persons reference unknown household ids:";
      for (std::size_t i = 0; i < unresolved.size() && i < 20; ++i) msg += " " + unresolved[i];
      if (unresolved.size() > 20) msg += " ... (" + std::to_string(unresolved.size()) + " total)";
      throw InputError(msg);
    }

    for (std::size_t h = 0; h < sample.households.size(); ++h) {
      const auto& hh = sample.households[h];
      if (declared_size[h] && static_cast<std::size_t>(*declared_size[h]) != hh.size()) {
        throw InputError("household '" + hh.household_id + "' declares size " + std::to_string(*declared_size[h]) +
                         " but has " + std::to_string(hh.size()) + " members");
      }
      for (auto m : hh.members) {
        const auto& person = sample.persons[m];
        if ((hh.religion && person.religion != *hh.religion) || (hh.caste && person.caste != *hh.caste)) {
          sample.warnings.push_back("household '" + hh.household_id + "': member '" + person.person_id +
                                    "' does not share the household religion/caste");
          break;
        }
      }
    }
  }

  // Households without members cannot be sampled; drop them and renumber.
  std::vector<MicroHousehold> kept;
  kept.reserve(sample.households.size());
  for (auto& hh : sample.households) {
    if (hh.members.empty()) {
      sample.warnings.push_back("household '" + hh.household_id + "' has no members; dropped");
    } else {
      kept.push_back(std::move(hh));
    }
  }
  sample.households = std::move(kept);
  if (sample.households.empty()) throw InputError("microdata contains no households with members");
  return sample;
}

}  // namespace synthpop::io
