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

#include "synthpop/io/population.hpp"

#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"

namespace synthpop::io {

const std::array<std::string_view, kPopulationColumnCount> kPopulationColumns = {
    "Age",
    "SexLabel",
    "Height",
    "Weight",
    "HHID",
    "H_Lat",
    "H_Lon",
    "District",
    "AdminUnitName",
    "AdminUnitLatitude",
    "AdminUnitLongitude",
    "Religion",
    "Caste",
    "JobLabel",
    "JobID",
    "WorkPlaceID",
    "W_Lat",
    "W_Lon",
    "essential_worker",
    "Adherence_to_Intervention",
    "PublicTransport_Jobs",
    "school_id",
    "school_lat",
    "school_long",
    "public_place_id",
    "public_place_lat",
    "public_place_long",
    "Agent_ID",
    "PSUID",
    "M_Fever",
    "M_Diarrhea",
    "M_Cataract",
    "M_Heart_disease",
    "M_Diabetes",
    "M_Leprosy",
    "M_Cancer",
    "M_Asthma",
    "M_Paralysis",
    "M_Epilepsy",
    "AgeGroup",
    "HouseholdSize",
    "MemberIndex",
    "SourceHHID",
    "SourcePersonID",
};

namespace {

class RowBuilder {
 public:
  explicit RowBuilder(std::string& line) : line_(line) { line_.clear(); }

  void sep() {
    if (n_++) line_.push_back(',');
  }
  void text(std::string_view s) {
    sep();
    append_csv_field(line_, s);
  }
  void real(double v) {
    sep();
    append_double(line_, v);
  }
  void real(const std::optional<double>& v) {
    sep();
    if (v) append_double(line_, *v);
  }
  template <typename Int>
  void integer(Int v) {
    sep();
    append_int(line_, v);
  }
  void point(const std::optional<LatLon>& p) {
    real(p ? std::optional<double>(p->lat) : std::nullopt);
    real(p ? std::optional<double>(p->lon) : std::nullopt);
  }
  std::size_t count() const { return n_; }

 private:
  std::string& line_;
  std::size_t n_ = 0;
};

}  // namespace

void encode_person(const PersonRecord& p, std::string& line) {
  RowBuilder b(line);
  b.integer(p.age);
  b.text(p.sex);
  b.real(p.height);
  b.real(p.weight);
  b.integer(p.hhid);
  b.real(p.home.lat);
  b.real(p.home.lon);
  b.text(p.district);
  b.text(p.admin_unit);
  b.point(p.admin_unit_center);
  b.text(p.religion);
  b.text(p.caste);
  b.text(p.job_label);
  b.integer(p.job_id);
  b.integer(p.workplace_id);
  b.point(p.workplace);
  b.integer(p.essential_worker ? 1 : 0);
  b.real(p.adherence);
  b.integer(p.public_transport_jobs);
  b.integer(p.school_id);
  b.point(p.school);
  b.integer(p.public_place_id);
  b.point(p.public_place);
  b.integer(p.agent_id);
  b.text(p.psu_id);
  for (bool f : p.comorbidities) b.integer(f ? 1 : 0);
  b.text(p.age_group);
  b.integer(p.household_size);
  b.integer(p.member_index);
  b.text(p.source_hhid);
  b.text(p.source_person_id);
  if (b.count() != kPopulationColumnCount) {
    throw PipelineError("population row has " + std::to_string(b.count()) + " fields, schema has " +
                        std::to_string(kPopulationColumnCount));
  }
}

PopulationWriter::PopulationWriter(const std::filesystem::path& path) : out_(path) {
  std::string header;
  for (std::size_t i = 0; i < kPopulationColumns.size(); ++i) {
    if (i) header.push_back(',');
    header.append(kPopulationColumns[i]);
  }
  out_.write_line(header);
}

void PopulationWriter::write(const PersonRecord& p) {
  encode_person(p, line_);
  out_.write_line(line_);
  ++rows_;
}

void PopulationWriter::write(std::span<const PersonRecord> batch) {
  for (const auto& p : batch) write(p);
}

void PopulationWriter::close() { out_.close(); }

std::uint64_t write_population(std::span<const PersonRecord> persons, const std::filesystem::path& path) {
  PopulationWriter w(path);
  w.write(persons);
  w.close();
  return w.rows();
}

namespace {

std::optional<double> opt_real(const CsvReader& r, std::size_t c) {
  if (is_missing_token(r[c])) return std::nullopt;
  auto v = parse_double(r[c]);
  if (!v) r.fail(c, "not a number");
  return v;
}

double req_real(const CsvReader& r, std::size_t c) {
  auto v = opt_real(r, c);
  if (!v) r.fail(c, "missing value");
  return *v;
}

template <typename Int>
Int req_int(const CsvReader& r, std::size_t c) {
  auto v = parse_int<Int>(r[c]);
  if (!v) r.fail(c, "not an integer");
  return *v;
}

std::optional<LatLon> opt_point(const CsvReader& r, std::size_t c) {
  auto lat = opt_real(r, c);
  auto lon = opt_real(r, c + 1);
  if (lat.has_value() != lon.has_value()) r.fail(c, "latitude and longitude must both be present or both empty");
  if (!lat) return std::nullopt;
  return LatLon{*lat, *lon};
}

}  // namespace

std::vector<PersonRecord> load_population(const std::filesystem::path& path) {
  CsvReader r(path);
  std::array<std::size_t, kPopulationColumnCount> c{};
  for (std::size_t i = 0; i < kPopulationColumnCount; ++i) {
    c[i] = r.require_column(kPopulationColumns[i]);
    if (c[i] != i) throw InputError("file '" + path.string() + "' columns are not in population schema order");
  }
  std::vector<PersonRecord> out;
  while (r.next()) {
    PersonRecord p;
    std::size_t k = 0;
    p.age = req_int<int>(r, k++);
    p.sex = r[k++];
    p.height = opt_real(r, k++);
    p.weight = opt_real(r, k++);
    p.hhid = req_int<std::uint64_t>(r, k++);
    p.home.lat = req_real(r, k++);
    p.home.lon = req_real(r, k++);
    p.district = r[k++];
    p.admin_unit = r[k++];
    p.admin_unit_center = opt_point(r, k);
    k += 2;
    p.religion = r[k++];
    p.caste = r[k++];
    p.job_label = r[k++];
    p.job_id = req_int<int>(r, k++);
    p.workplace_id = req_int<std::uint64_t>(r, k++);
    p.workplace = opt_point(r, k);
    k += 2;
    p.essential_worker = req_int<int>(r, k++) != 0;
    p.adherence = req_real(r, k++);
    p.public_transport_jobs = req_int<int>(r, k++);
    p.school_id = req_int<std::uint64_t>(r, k++);
    p.school = opt_point(r, k);
    k += 2;
    p.public_place_id = req_int<std::uint64_t>(r, k++);
    p.public_place = opt_point(r, k);
    k += 2;
    p.agent_id = req_int<std::uint64_t>(r, k++);
    p.psu_id = r[k++];
    for (auto& f : p.comorbidities) f = req_int<int>(r, k++) != 0;
    p.age_group = r[k++];
    p.household_size = req_int<int>(r, k++);
    p.member_index = req_int<int>(r, k++);
    p.source_hhid = r[k++];
    p.source_person_id = r[k++];
    out.push_back(std::move(p));
  }
  return out;
}

std::unordered_map<std::string, std::vector<std::string>> read_columns(const std::filesystem::path& path,
                                                                        std::span<const std::string> names) {
  CsvReader r(path);
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(r.require_column(n));
  std::unordered_map<std::string, std::vector<std::string>> out;
  for (const auto& n : names) out[n];
  while (r.next()) {
    for (std::size_t i = 0; i < names.size(); ++i) out[names[i]].push_back(r.row()[idx[i]]);
  }
  return out;
}

}  // namespace synthpop::io
