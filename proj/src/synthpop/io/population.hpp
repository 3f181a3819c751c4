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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synthpop/common/csv.hpp"
#include "synthpop/io/geometry.hpp"
#include "synthpop/io/microdata.hpp"

namespace synthpop::io {

inline constexpr std::size_t kPopulationColumnCount = 44;

// Output header, in order. The first 39 columns are the standard agent
// layout; the last five carry household bookkeeping.
extern const std::array<std::string_view, kPopulationColumnCount> kPopulationColumns;

// One synthetic person, i.e. one output row. Location ids of 0 mean "none".
struct PersonRecord {
  int age = 0;
  std::string sex;
  std::optional<double> height;
  std::optional<double> weight;
  std::uint64_t hhid = 0;
  LatLon home;
  std::string district;
  std::string admin_unit;
  std::optional<LatLon> admin_unit_center;
  std::string religion;
  std::string caste;
  std::string job_label;
  int job_id = 0;
  std::uint64_t workplace_id = 0;
  std::optional<LatLon> workplace;
  bool essential_worker = false;
  double adherence = 0.0;
  int public_transport_jobs = 1;
  std::uint64_t school_id = 0;
  std::optional<LatLon> school;
  std::uint64_t public_place_id = 0;
  std::optional<LatLon> public_place;
  std::uint64_t agent_id = 0;
  std::string psu_id;
  Comorbidities comorbidities{};
  std::string age_group;
  int household_size = 0;
  int member_index = 0;
  std::string source_hhid;
  std::string source_person_id;

  friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

// Encodes one record as a CSV line (no newline). Missing values become empty
// cells. Throws PipelineError if the row width ever differs from the header.
void encode_person(const PersonRecord& p, std::string& line);

// Streams records to disk; memory use does not depend on the row count.
class PopulationWriter {
 public:
  explicit PopulationWriter(const std::filesystem::path& path);

  void write(const PersonRecord& p);
  void write(std::span<const PersonRecord> batch);
  std::uint64_t rows() const { return rows_; }
  void close();

 private:
  CsvWriter out_;
  std::string line_;
  std::uint64_t rows_ = 0;
};

std::uint64_t write_population(std::span<const PersonRecord> persons, const std::filesystem::path& path);

// Reads a population file written by PopulationWriter.
std::vector<PersonRecord> load_population(const std::filesystem::path& path);

// Reads the named columns of any CSV as raw strings; throws InputError naming
// the first column that does not exist.
std::unordered_map<std::string, std::vector<std::string>> read_columns(const std::filesystem::path& path,
                                                                        std::span<const std::string> names);

}  // namespace synthpop::io
