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

#include "synthpop/io/marginals.hpp"

#include <algorithm>
#include <cmath>

#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::io {

double MarginalTable::total() const {
  double t = 0.0;
  for (const auto& [cat, count] : categories) t += count;
  return t;
}

const MarginalTable* MarginalSet::find(std::string_view attribute) const {
  for (const auto& t : tables) {
    if (t.attribute == attribute) return &t;
  }
  return nullptr;
}

double MarginalSet::person_total() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& t : tables) {
    if (t.level == AttributeLevel::kPerson) {
      sum += t.total();
      ++n;
    }
  }
  return n ? sum / n : 0.0;
}

AttributeLevel attribute_level(std::string_view attribute) {
  return attribute == kHouseholdSizeAttribute ? AttributeLevel::kHousehold : AttributeLevel::kPerson;
}

void validate_marginals(MarginalSet& set) {
  if (set.tables.empty()) throw InputError("no marginal rows for region '" + set.region_id + "'");
  const MarginalTable* first = nullptr;
  for (const auto& t : set.tables) {
    for (const auto& [cat, count] : t.categories) {
      if (!(count >= 0.0) || !std::isfinite(count)) {
        throw InputError("marginal '" + t.attribute + "' category '" + cat + "' has invalid count");
      }
    }
    if (t.level != AttributeLevel::kPerson) continue;
    if (!first) {
      first = &t;
      continue;
    }
    const double a = first->total();
    const double b = t.total();
    if (std::fabs(a - b) > 0.005 * std::max(a, b)) {
      throw InputError("marginal totals disagree: '" + first->attribute + "' sums to " + format_double(a) + " but '" +
                       t.attribute + "' sums to " + format_double(b) + " (tolerance 0.5%)");
    }
  }
  if (const auto* hh = set.find(kHouseholdSizeAttribute); hh && first) {
    // An open "N+" category only gives a lower bound on the persons it holds.
    double implied = 0.0;
    bool open_ended = false;
    bool numeric = true;
    for (const auto& [cat, count] : hh->categories) {
      std::string_view label = cat;
      if (!label.empty() && label.back() == '+') {
        label.remove_suffix(1);
        open_ended = open_ended || count > 0.0;
      }
      const auto size = parse_int<int>(label);
      if (!size) {
        numeric = false;
        break;
      }
      implied += *size * count;
    }
    const double persons = set.person_total();
    const double tol = 0.005 * std::max(implied, persons);
    const bool mismatch = open_ended ? implied > persons + tol : std::fabs(implied - persons) > tol;
    if (numeric && mismatch) {
      set.warnings.push_back("household sizes imply " + format_double(implied) + " persons but person tables sum to " +
                             format_double(persons));
    }
  }
}

MarginalSet load_marginals(const std::filesystem::path& path, std::string_view region_id) {
  CsvReader r(path);
  const auto c_region = r.column("region");
  const auto c_attr = r.require_column("attribute");
  const auto c_cat = r.require_column("category");
  const auto c_count = r.require_column("count");

  MarginalSet set;
  set.region_id = std::string(region_id);
  while (r.next()) {
    if (c_region && trim(r[*c_region]) != region_id) continue;
    const std::string attr(trim(r[c_attr]));
    const std::string cat(trim(r[c_cat]));
    if (attr.empty()) r.fail(c_attr, "empty attribute name");
    const auto count = parse_double(r[c_count]);
    if (!count) r.fail(c_count, "not a number: '" + std::string(r[c_count]) + "'");
    if (*count < 0.0) r.fail(c_count, "negative count " + std::string(trim(r[c_count])));

    auto it = std::find_if(set.tables.begin(), set.tables.end(), [&](const auto& t) { return t.attribute == attr; });
    if (it == set.tables.end()) {
      set.tables.push_back(MarginalTable{attr, attribute_level(attr), {}});
      it = std::prev(set.tables.end());
    }
    for (const auto& [existing, unused] : it->categories) {
      if (existing == cat) r.fail(c_cat, "duplicate category '" + cat + "' for attribute '" + attr + "'");
    }
    it->categories.emplace_back(cat, *count);
  }
  validate_marginals(set);
  return set;
}

}  // namespace synthpop::io
