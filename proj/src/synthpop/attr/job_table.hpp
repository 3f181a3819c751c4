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

#include <string>
#include <string_view>
#include <vector>

#include "synthpop/common/rng.hpp"
#include "synthpop/io/microdata.hpp"

namespace synthpop::attr {

inline constexpr std::string_view kHomeboundLabel = "Homebound";
inline constexpr int kHomeboundId = 0;
inline constexpr std::string_view kStudentLabel = "Student";
inline constexpr int kStudentId = 199;
inline constexpr std::string_view kTeacherLabel = "Teacher";

// Ages below this are homebound; from here up to kAdultAge (exclusive) are
// students. Age exactly 3 is a student.
inline constexpr int kStudentAge = 3;
inline constexpr int kAdultAge = 18;

struct Job {
  std::string label;
  int id = 0;

  friend bool operator==(const Job&, const Job&) = default;
};

struct JobEntry {
  Job job;
  double weight = 0.0;
};

// Job descriptions with sampling weights proportional to observed adult
// frequency.
class JobTable {
 public:
  JobTable() = default;
  explicit JobTable(std::vector<JobEntry> entries);

  // Counts job labels of persons aged >= kAdultAge. Labels without a JobID in
  // the data get fresh ids above every observed id.
  static JobTable from_microdata(const io::MicroSample& sample);

  const std::vector<JobEntry>& entries() const { return entries_; }
  const JobEntry* find(std::string_view label) const;
  const Job& draw(Rng& rng) const;
  // Weighted draw restricted to entries that are neither Homebound nor Student.
  const Job& draw_workplace_type(Rng& rng) const;

 private:
  std::vector<JobEntry> entries_;
  std::vector<double> cumulative_;
  std::vector<double> workplace_cumulative_;
};

// Homebound below age 3, Student from 3 to 17, otherwise a weighted draw.
Job assign_job(int age, const JobTable& table, Rng& rng);

}  // namespace synthpop::attr
