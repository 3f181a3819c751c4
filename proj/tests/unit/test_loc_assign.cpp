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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "synthpop/common/error.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/loc/assign.hpp"
#include "synthpop/loc/decay.hpp"

using namespace synthpop;
using loc::ExternalLocation;
using loc::LocationKind;

namespace {

ExternalLocation at(std::uint64_t id, double lat, double lon, LocationKind kind = LocationKind::kWorkplace) {
  return ExternalLocation{id, kind, kind == LocationKind::kPublicPlace ? "" : "Clerk", {lat, lon}};
}

std::vector<double> frequencies(LatLon home, const std::vector<ExternalLocation>& c, const loc::DecayFunction& f,
                                int draws, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> n(c.size(), 0.0);
  for (int i = 0; i < draws; ++i) n[loc::assign(home, c, f, rng)] += 1.0;
  for (auto& x : n) x /= draws;
  return n;
}

}  // namespace

TEST_CASE("l2_distance") {
  CHECK(loc::l2_distance({0, 0}, {3, 4}) == 5.0);
  CHECK(loc::l2_distance({19.024, 72.911}, {19.024, 72.911}) == 0.0);
  // sqrt(0.05^2 + 0.079^2) by hand: 0.0025 + 0.006241 = 0.008741 -> 0.093493...
  CHECK(loc::l2_distance({19.024, 72.911}, {19.074, 72.832}) == doctest::Approx(0.09349).epsilon(1e-4));
}

TEST_CASE("decay functions are positive, finite and decreasing") {
  for (const auto form : {loc::DecayForm::kReciprocal, loc::DecayForm::kExponential, loc::DecayForm::kPower}) {
    loc::DecayFunction f;
    f.form = form;
    f.exponent = 2.0;
    CAPTURE(loc::decay_form_name(form));
    CHECK(std::isfinite(f(0.0)));
    CHECK(f(0.0) > 0.0);
    double prev = f(1e-3);
    for (double d = 2e-3; d < 2.0; d *= 1.5) {
      CHECK(f(d) < prev);
      CHECK(f(d) > 0.0);
      prev = f(d);
    }
    CHECK(loc::parse_decay_form(loc::decay_form_name(form)) == form);
  }
  loc::DecayFunction r;
  CHECK(r(0.0) == doctest::Approx(1e4));
  CHECK(r(0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loc::parse_decay_form("gravity"), InputError);
  loc::DecayFunction bad;
  bad.d_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = {};
  bad.form = loc::DecayForm::kExponential;
  bad.rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("assign: single candidate and empty list") {
  const std::vector<ExternalLocation> one{at(7, 1, 1)};
  Rng rng(1);
  for (int i = 0; i < 10; ++i) CHECK(loc::assign({0, 0}, one, {}, rng) == 0);
  const std::vector<ExternalLocation> none;
  CHECK_THROWS_AS(loc::assign({0, 0}, none, {}, rng), PipelineError);
}

TEST_CASE("assign: reciprocal weights at distances one and two") {
  const std::vector<ExternalLocation> c{at(1, 1, 0), at(2, 0, 2)};
  const auto freq = frequencies({0, 0}, c, {}, 100000, 42);
  CHECK(std::fabs(freq[0] - 2.0 / 3.0) <= 0.01);
  CHECK(std::fabs(freq[1] - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("assign: co-located candidate uses the distance floor") {
  const std::vector<ExternalLocation> c{at(1, 0, 0), at(2, 1, 0)};
  loc::DecayFunction f;
  // weights 1/d_min = 1e4 and 1
  const auto freq = frequencies({0, 0}, c, f, 20000, 3);
  CHECK(freq[0] > 0.999);
}

TEST_CASE("assign: frequencies match normalized weights (chi-square, 5 candidates)") {
  const std::vector<ExternalLocation> c{at(1, 0.1, 0), at(2, 0, 0.25), at(3, -0.4, 0), at(4, 0.3, 0.3), at(5, 0, -1)};
  const loc::DecayFunction f;
  std::vector<double> w;
  for (const auto& e : c) w.push_back(f(loc::l2_distance({0, 0}, e.position)));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  const auto freq = frequencies({0, 0}, c, f, 100000, 77);
  double stat = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double expected = 100000 * w[i] / total;
    const double observed = 100000 * freq[i];
    stat += (observed - expected) * (observed - expected) / expected;
  }
  CHECK(stat < 13.277);  // chi-square, 4 degrees of freedom, 0.99 quantile
}

TEST_CASE("assign: moving a candidate away lowers its share") {
  const std::vector<ExternalLocation> near{at(1, 1, 0), at(2, 0, 1.5)};
  const std::vector<ExternalLocation> far{at(1, 1, 0), at(2, 0, 3.0)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = frequencies({0, 0}, near, {}, 20000, seed);
    const auto b = frequencies({0, 0}, far, {}, 20000, seed);
    CHECK(b[1] <= a[1]);
  }
}

TEST_CASE("candidate index returns the nearest locations") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ExternalLocation> locs;
  for (std::uint64_t i = 0; i < 500; ++i) locs.push_back(at(i + 1, u(gen), u(gen)));
  const loc::CandidateIndex index(locs, 25);
  const loc::CandidateIndex all(locs, 0);
  std::vector<std::size_t> got;
  for (int q = 0; q < 50; ++q) {
    const LatLon home{u(gen), u(gen)};
    index.candidates(home, got);
    std::vector<std::size_t> order(locs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return loc::l2_distance(home, locs[a].position) < loc::l2_distance(home, locs[b].position);
    });
    order.resize(25);
    std::sort(order.begin(), order.end());
    CHECK(got == order);
  }
  all.candidates({0.5, 0.5}, got);
  CHECK(got.size() == 500);
}

TEST_CASE("prepared choice draws like assign") {
  const std::vector<ExternalLocation> c{at(1, 1, 0), at(2, 0, 2), at(3, 0, 4)};
  const loc::CandidateIndex index(c, 0);
  loc::DecayChoice choice;
  choice.prepare({0, 0}, index, {});
  Rng rng(9);
  std::vector<double> n(3, 0.0);
  for (int i = 0; i < 70000; ++i) n[choice.draw(rng)] += 1;
  // weights 1, 1/2, 1/4 -> 4/7, 2/7, 1/7
  CHECK(std::fabs(n[0] / 70000 - 4.0 / 7) < 0.01);
  CHECK(std::fabs(n[1] / 70000 - 2.0 / 7) < 0.01);
  CHECK(std::fabs(n[2] / 70000 - 1.0 / 7) < 0.01);
}

TEST_CASE("roles from job labels") {
  CHECK(loc::role_for_job("Homebound") == loc::Role::kHomebound);
  CHECK(loc::role_for_job("Student") == loc::Role::kStudent);
  CHECK(loc::role_for_job("Teacher") == loc::Role::kWorker);
}

TEST_CASE("assign_all gives each role its locations") {
  loc::LocationSet set{loc::CandidateIndex({at(10, 0.1, 0.1)}, 0),
                       loc::CandidateIndex({at(20, 0.2, 0.2), at(21, 0.9, 0.9)}, 0),
                       loc::CandidateIndex({at(30, 0.3, 0.3, LocationKind::kPublicPlace)}, 0)};
  const std::vector<loc::AssignablePerson> persons{
      {{0, 0}, loc::Role::kHomebound}, {{0, 0}, loc::Role::kStudent}, {{0, 0}, loc::Role::kWorker}};
  const auto out = loc::assign_all(persons, set, {}, 1);
  REQUIRE(out.size() == 3);
  CHECK_FALSE(out[0].workplace);
  CHECK_FALSE(out[0].school);
  CHECK(out[0].public_place == 0);
  CHECK_FALSE(out[1].workplace);
  REQUIRE(out[1].school);
  CHECK(*out[1].school < 2);
  REQUIRE(out[2].workplace);
  CHECK(*out[2].workplace == 0);
  CHECK_FALSE(out[2].school);
}

TEST_CASE("assign_all: completeness and determinism on a crowd") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ExternalLocation> w, s, p;
  for (std::uint64_t i = 0; i < 40; ++i) w.push_back(at(i, u(gen), u(gen)));
  for (std::uint64_t i = 0; i < 8; ++i) s.push_back(at(100 + i, u(gen), u(gen), LocationKind::kSchool));
  for (std::uint64_t i = 0; i < 15; ++i) p.push_back(at(200 + i, u(gen), u(gen), LocationKind::kPublicPlace));
  loc::LocationSet set{loc::CandidateIndex(w, 10), loc::CandidateIndex(s, 0), loc::CandidateIndex(p, 5)};
  std::vector<loc::AssignablePerson> persons;
  for (int i = 0; i < 3000; ++i) {
    persons.push_back({{u(gen), u(gen)}, static_cast<loc::Role>(i % 3)});
  }
  const auto a = loc::assign_all(persons, set, {}, 5);
  const auto b = loc::assign_all(persons, set, {}, 5);
  for (std::size_t i = 0; i < persons.size(); ++i) {
    CHECK(a[i].public_place < p.size());
    CHECK(a[i].workplace.has_value() == (persons[i].role == loc::Role::kWorker));
    CHECK(a[i].school.has_value() == (persons[i].role == loc::Role::kStudent));
    CHECK(a[i].workplace == b[i].workplace);
    CHECK(a[i].school == b[i].school);
    CHECK(a[i].public_place == b[i].public_place);
  }
}

TEST_CASE("assign_all names a missing location kind") {
  loc::LocationSet set{loc::CandidateIndex({at(10, 0.1, 0.1)}, 0), loc::CandidateIndex({}, 0),
                       loc::CandidateIndex({at(30, 0.3, 0.3, LocationKind::kPublicPlace)}, 0)};
  const std::vector<loc::AssignablePerson> persons{{{0, 0}, loc::Role::kStudent}};
  try {
    loc::assign_all(persons, set, {}, 1);
    FAIL("expected an error");
  } catch (const PipelineError& e) {
    CHECK(std::string(e.what()).find("school") != std::string::npos);
  }
}
