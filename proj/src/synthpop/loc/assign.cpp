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

#include "synthpop/loc/assign.hpp"

#include <algorithm>
#include <cmath>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <boost/iterator/function_output_iterator.hpp>

#include "synthpop/attr/job_table.hpp"
#include "synthpop/common/error.hpp"

namespace synthpop::loc {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

std::string_view location_kind_name(LocationKind kind) {
  switch (kind) {
    case LocationKind::kWorkplace:
      return "workplace";
    case LocationKind::kSchool:
      return "school";
    case LocationKind::kPublicPlace:
      return "public_place";
  }
  return "workplace";
}

namespace {

std::size_t draw_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

}  // namespace

std::size_t assign(LatLon home, std::span<const ExternalLocation> candidates, const DecayFunction& f, Rng& rng) {
  if (candidates.empty()) throw PipelineError("no candidate locations to assign from");
  std::vector<double> cumulative;
  cumulative.reserve(candidates.size());
  double total = 0.0;
  for (const auto& c : candidates) {
    total += f(l2_distance(home, c.position));
    cumulative.push_back(total);
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw PipelineError("decay weights are not positive and finite");
  return draw_cumulative(cumulative, rng);
}

struct CandidateIndex::Tree {
  using Point = bg::model::point<double, 2, bg::cs::cartesian>;
  using Value = std::pair<Point, std::size_t>;
  bgi::rtree<Value, bgi::quadratic<16>> rtree;
};

CandidateIndex::CandidateIndex(std::vector<ExternalLocation> locations, std::size_t nearest_n)
    : locations_(std::move(locations)), nearest_n_(nearest_n) {
  if (nearest_n_ > 0 && nearest_n_ < locations_.size()) {
    tree_ = std::make_unique<Tree>();
    std::vector<Tree::Value> values;
    values.reserve(locations_.size());
    for (std::size_t i = 0; i < locations_.size(); ++i) {
      values.emplace_back(Tree::Point(locations_[i].position.lat, locations_[i].position.lon), i);
    }
    tree_->rtree = bgi::rtree<Tree::Value, bgi::quadratic<16>>(values.begin(), values.end());
  }
}

CandidateIndex::~CandidateIndex() = default;
CandidateIndex::CandidateIndex(CandidateIndex&&) noexcept = default;
CandidateIndex& CandidateIndex::operator=(CandidateIndex&&) noexcept = default;

void CandidateIndex::candidates(LatLon home, std::vector<std::size_t>& out) const {
  out.clear();
  if (!tree_) {
    out.resize(locations_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return;
  }
  tree_->rtree.query(bgi::nearest(Tree::Point(home.lat, home.lon), static_cast<unsigned>(nearest_n_)),
                     boost::make_function_output_iterator([&](const Tree::Value& v) { out.push_back(v.second); }));
  std::sort(out.begin(), out.end());
}

void DecayChoice::prepare(LatLon home, const CandidateIndex& index, const DecayFunction& f) {
  if (index.empty()) throw PipelineError("no candidate locations to assign from");
  index.candidates(home, candidates_);
  cumulative_.resize(candidates_.size());
  double total = 0.0;
  for (std::size_t k = 0; k < candidates_.size(); ++k) {
    total += f(l2_distance(home, index.locations()[candidates_[k]].position));
    cumulative_[k] = total;
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw PipelineError("decay weights are not positive and finite");
}

std::size_t DecayChoice::draw(Rng& rng) const { return candidates_[draw_cumulative(cumulative_, rng)]; }

Role role_for_job(std::string_view job_label) {
  if (job_label == attr::kHomeboundLabel) return Role::kHomebound;
  if (job_label == attr::kStudentLabel) return Role::kStudent;
  return Role::kWorker;
}

std::vector<Assignment> assign_all(std::span<const AssignablePerson> persons, const LocationSet& locations,
                                   const AssignOptions& options, std::uint64_t seed) {
  options.work_decay.validate();
  options.public_decay.validate();
  bool need_work = false;
  bool need_school = false;
  for (const auto& p : persons) {
    need_work = need_work || p.role == Role::kWorker;
    need_school = need_school || p.role == Role::kStudent;
  }
  if (need_work && locations.workplaces.empty()) throw PipelineError("workers exist but there are no workplaces");
  if (need_school && locations.schools.empty()) throw PipelineError("students exist but there are no schools");
  if (!persons.empty() && locations.public_places.empty()) throw PipelineError("there are no public places");

  std::vector<Assignment> out(persons.size());
  DecayChoice choice;
  for (std::size_t i = 0; i < persons.size(); ++i) {
    Rng rng = make_rng(seed, Stream::kAssignment, i);
    const auto& p = persons[i];
    if (p.role == Role::kWorker) {
      choice.prepare(p.home, locations.workplaces, options.work_decay);
      out[i].workplace = choice.draw(rng);
    } else if (p.role == Role::kStudent) {
      choice.prepare(p.home, locations.schools, options.work_decay);
      out[i].school = choice.draw(rng);
    }
    choice.prepare(p.home, locations.public_places, options.public_decay);
    out[i].public_place = choice.draw(rng);
  }
  return out;
}

}  // namespace synthpop::loc
