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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synthpop/common/rng.hpp"
#include "synthpop/loc/decay.hpp"

namespace synthpop::loc {

enum class LocationKind { kWorkplace, kSchool, kPublicPlace };

std::string_view location_kind_name(LocationKind kind);

struct ExternalLocation {
  std::uint64_t id = 0;
  LocationKind kind = LocationKind::kWorkplace;
  std::string workplace_type;  // workplaces and schools only
  LatLon position;
};

// Draws one candidate with probability f(D(home, e)) / sum_e' f(D(home, e')).
// Returns the index into candidates; throws PipelineError if empty.
std::size_t assign(LatLon home, std::span<const ExternalLocation> candidates, const DecayFunction& f, Rng& rng);

// Candidate lookup for one kind of location. With nearest_n > 0 only the
// nearest_n locations (R-tree query) are weighted; 0 weights every location.
class CandidateIndex {
 public:
  CandidateIndex(std::vector<ExternalLocation> locations, std::size_t nearest_n);
  ~CandidateIndex();
  CandidateIndex(CandidateIndex&&) noexcept;
  CandidateIndex& operator=(CandidateIndex&&) noexcept;

  const std::vector<ExternalLocation>& locations() const { return locations_; }
  bool empty() const { return locations_.empty(); }
  std::size_t nearest_n() const { return nearest_n_; }

  // Indices into locations(), sorted ascending.
  void candidates(LatLon home, std::vector<std::size_t>& out) const;

 private:
  struct Tree;
  std::vector<ExternalLocation> locations_;
  std::size_t nearest_n_;
  std::unique_ptr<Tree> tree_;
};

// Decay-weighted choice over the candidates of one origin; prepared once per
// household and drawn once per member.
class DecayChoice {
 public:
  void prepare(LatLon home, const CandidateIndex& index, const DecayFunction& f);
  // Index into index.locations().
  std::size_t draw(Rng& rng) const;
  std::span<const std::size_t> candidates() const { return candidates_; }
  std::span<const double> cumulative() const { return cumulative_; }

 private:
  std::vector<std::size_t> candidates_;
  std::vector<double> cumulative_;
};

enum class Role { kHomebound, kStudent, kWorker };

Role role_for_job(std::string_view job_label);

struct AssignablePerson {
  LatLon home;
  Role role = Role::kWorker;
};

struct LocationSet {
  CandidateIndex workplaces;
  CandidateIndex schools;
  CandidateIndex public_places;
};

struct AssignOptions {
  DecayFunction work_decay;    // workplaces and schools
  DecayFunction public_decay;  // public places
};

// Indices into the corresponding LocationSet lists; nullopt means none.
struct Assignment {
  std::optional<std::size_t> workplace;
  std::optional<std::size_t> school;
  std::size_t public_place = 0;
};

// Students get a school, workers a workplace, everyone a public place.
// Person i draws from the stream (seed, assignment, i), so results do not
// depend on how persons are sharded.
std::vector<Assignment> assign_all(std::span<const AssignablePerson> persons, const LocationSet& locations,
                                   const AssignOptions& options, std::uint64_t seed);

}  // namespace synthpop::loc
