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
#include <string>
#include <utility>
#include <vector>

#include "synthpop/io/marginals.hpp"
#include "synthpop/io/microdata.hpp"
#include "synthpop/ipu/binning.hpp"

namespace synthpop::ipu {

struct Constraint {
  std::string attribute;
  std::string category;
  io::AttributeLevel level = io::AttributeLevel::kPerson;
};

// a[i][j] = members of household j in constraint i (0/1 for household-level
// constraints). Stored sparsely by row.
struct IncidenceMatrix {
  std::vector<Constraint> constraints;
  std::size_t households = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  double at(std::size_t i, std::size_t j) const;
  std::vector<std::vector<double>> dense() const;
  static IncidenceMatrix from_dense(const std::vector<std::vector<double>>& a, std::vector<Constraint> constraints = {});
};

// The category a microdata person falls in for a person-level attribute.
std::string person_category(const io::MicroPerson& p, const std::string& attribute, const BinningConfig& binning);

// One row per (attribute, category) in the marginals, in table order. Throws
// PipelineError naming any category no household reaches, and InputError for
// attributes or microdata categories the marginals cannot represent.
IncidenceMatrix build_incidence(const io::MicroSample& sample, const io::MarginalSet& marginals,
                                const BinningConfig& binning);

// Targets aligned with inc.constraints.
std::vector<double> constraint_targets(const io::MarginalSet& marginals, const IncidenceMatrix& inc);

}  // namespace synthpop::ipu
