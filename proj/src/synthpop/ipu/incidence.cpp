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

#include "synthpop/ipu/incidence.hpp"

#include <unordered_map>

#include "synthpop/common/error.hpp"

namespace synthpop::ipu {

double IncidenceMatrix::at(std::size_t i, std::size_t j) const {
  for (const auto& [col, v] : rows[i]) {
    if (col == j) return v;
  }
  return 0.0;
}

std::vector<std::vector<double>> IncidenceMatrix::dense() const {
  std::vector<std::vector<double>> a(rows.size(), std::vector<double>(households, 0.0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, v] : rows[i]) a[i][j] = v;
  }
  return a;
}

IncidenceMatrix IncidenceMatrix::from_dense(const std::vector<std::vector<double>>& a,
                                            std::vector<Constraint> constraints) {
  IncidenceMatrix m;
  m.households = a.empty() ? 0 : a.front().size();
  if (constraints.empty()) {
    for (std::size_t i = 0; i < a.size(); ++i) constraints.push_back({"c", std::to_string(i), io::AttributeLevel::kPerson});
  }
  m.constraints = std::move(constraints);
  m.rows.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != m.households) throw PipelineError("ragged incidence matrix");
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i][j] < 0.0) throw PipelineError("negative incidence entry");
      if (a[i][j] != 0.0) m.rows[i].emplace_back(static_cast<std::uint32_t>(j), a[i][j]);
    }
  }
  return m;
}

std::string person_category(const io::MicroPerson& p, const std::string& attribute, const BinningConfig& binning) {
  if (attribute == io::kAgeGroupAttribute) return binning.age_bins.label_for(p.age);
  if (attribute == io::kSexAttribute) return p.sex;
  if (attribute == io::kReligionAttribute) return p.religion;
  if (attribute == io::kCasteAttribute) return p.caste;
  throw InputError("marginal attribute '" + attribute + "' cannot be derived from microdata");
}

IncidenceMatrix build_incidence(const io::MicroSample& sample, const io::MarginalSet& marginals,
                                const BinningConfig& binning) {
  IncidenceMatrix inc;
  inc.households = sample.households.size();
  for (const auto& table : marginals.tables) {
    std::unordered_map<std::string, std::size_t> row_of;
    const std::size_t first_row = inc.constraints.size();
    for (const auto& [cat, target] : table.categories) {
      row_of.emplace(cat, inc.constraints.size());
      inc.constraints.push_back({table.attribute, cat, table.level});
      inc.rows.emplace_back();
    }
    for (std::size_t j = 0; j < sample.households.size(); ++j) {
      const auto& hh = sample.households[j];
      if (table.level == io::AttributeLevel::kHousehold) {
        const auto label = binning.household_size_label(hh.size());
        const auto it = row_of.find(label);
        if (it == row_of.end()) {
          throw InputError("household size category '" + label + "' (household '" + hh.household_id +
                           "') is missing from marginal '" + table.attribute + "'");
        }
        inc.rows[it->second].emplace_back(static_cast<std::uint32_t>(j), 1.0);
        continue;
      }
      std::unordered_map<std::size_t, double> counts;
      for (auto m : hh.members) {
        const auto cat = person_category(sample.persons[m], table.attribute, binning);
        const auto it = row_of.find(cat);
        if (it == row_of.end()) {
          throw InputError("microdata category '" + cat + "' (person '" + sample.persons[m].person_id +
                           "') is missing from marginal '" + table.attribute + "'");
        }
        counts[it->second] += 1.0;
      }
      for (std::size_t r = first_row; r < inc.constraints.size(); ++r) {
        if (auto it = counts.find(r); it != counts.end()) {
          inc.rows[r].emplace_back(static_cast<std::uint32_t>(j), it->second);
        }
      }
    }
  }
  for (std::size_t i = 0; i < inc.rows.size(); ++i) {
    if (inc.rows[i].empty()) {
      throw PipelineError("infeasible constraint: no microdata household has " + inc.constraints[i].attribute + " = '" +
                          inc.constraints[i].category + "'");
    }
  }
  return inc;
}

std::vector<double> constraint_targets(const io::MarginalSet& marginals, const IncidenceMatrix& inc) {
  std::vector<double> t;
  t.reserve(inc.constraints.size());
  for (const auto& c : inc.constraints) {
    const auto* table = marginals.find(c.attribute);
    if (!table) throw InputError("no marginal table for attribute '" + c.attribute + "'");
    bool found = false;
    for (const auto& [cat, count] : table->categories) {
      if (cat == c.category) {
        t.push_back(count);
        found = true;
        break;
      }
    }
    if (!found) throw InputError("no marginal for " + c.attribute + " = '" + c.category + "'");
  }
  return t;
}

}  // namespace synthpop::ipu
