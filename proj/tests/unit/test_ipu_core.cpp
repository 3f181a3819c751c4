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
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "synthpop/assemble/fixtures.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/io/marginals.hpp"
#include "synthpop/io/microdata.hpp"
#include "synthpop/ipu/binning.hpp"
#include "synthpop/ipu/household_sampler.hpp"
#include "synthpop/ipu/incidence.hpp"
#include "synthpop/ipu/ipu_fit.hpp"

using namespace synthpop;

namespace {

struct Member {
  int age;
  const char* sex;
};

io::MicroSample make_sample(const std::vector<std::vector<Member>>& households) {
  io::MicroSample s;
  for (std::size_t h = 0; h < households.size(); ++h) {
    io::MicroHousehold hh;
    hh.household_id = "H" + std::to_string(h + 1);
    for (const auto& m : households[h]) {
      io::MicroPerson p;
      p.person_id = "P" + std::to_string(s.persons.size() + 1);
      p.household_id = hh.household_id;
      p.age = m.age;
      p.sex = m.sex;
      hh.members.push_back(s.persons.size());
      s.persons.push_back(p);
    }
    s.households.push_back(hh);
  }
  return s;
}

io::MarginalTable table(std::string attr, std::vector<std::pair<std::string, double>> cats) {
  io::MarginalTable t;
  t.level = io::attribute_level(attr);
  t.attribute = std::move(attr);
  t.categories = std::move(cats);
  return t;
}

ipu::IncidenceMatrix three_household_case() {
  // households {M}, {F}, {M,F}; constraints M, F
  return ipu::IncidenceMatrix::from_dense({{1, 0, 1}, {0, 1, 1}});
}

// Output of tests/oracles/ipu_reference.py (10,000 epochs of alternating
// scaling from the rescaled all-ones start).
ipu::IpuOptions fit_options(double tol, int max_iter = 2000) {
  ipu::IpuOptions o;
  o.tol = tol;
  o.max_iter = max_iter;
  return o;
}

constexpr double kOracleWeights[] = {6.324555320336759, 2.324555320336759, 3.675444679663241};

}  // namespace

TEST_CASE("binning labels") {
  AgeBins bins;
  CHECK(bins.size() == 18);
  CHECK(bins.label_for(0) == "0-4");
  CHECK(bins.label_for(84) == "80-84");
  CHECK(bins.label_for(85) == "85+");
  CHECK(bins.label_for(119) == "85+");
  BinningConfig cfg;
  CHECK(cfg.household_size_label(1) == "1");
  CHECK(cfg.household_size_label(7) == "7+");
  CHECK(cfg.household_size_label(12) == "7+");
  CHECK_THROWS(AgeBins({5, 10}));
  CHECK_THROWS(AgeBins({0, 10, 10}));
}

TEST_CASE("build_incidence counts members per constraint") {
  const auto sample = make_sample({{{30, "M"}}, {{40, "M"}, {35, "F"}}});
  io::MarginalSet m;
  m.tables.push_back(table("sex", {{"M", 2}, {"F", 1}}));
  const auto inc = ipu::build_incidence(sample, m, BinningConfig{});
  CHECK(inc.dense() == std::vector<std::vector<double>>{{1, 1}, {0, 1}});

  m.tables.push_back(table("household_size", {{"1", 1}, {"2", 1}}));
  const auto inc2 = ipu::build_incidence(sample, m, BinningConfig{});
  CHECK(inc2.dense() == std::vector<std::vector<double>>{{1, 1}, {0, 1}, {1, 0}, {0, 1}});
  CHECK(inc2.constraints[2].level == io::AttributeLevel::kHousehold);
  CHECK(ipu::constraint_targets(m, inc2) == std::vector<double>{2, 1, 1, 1});
}

TEST_CASE("build_incidence rejects an unreachable category by name") {
  const auto sample = make_sample({{{30, "M"}}, {{40, "M"}, {35, "F"}}});
  io::MarginalSet m;
  m.tables.push_back(table("age_group", {{"0-89", 3}, {"90+", 1}}));
  BinningConfig binning{AgeBins({0, 90})};
  try {
    ipu::build_incidence(sample, m, binning);
    FAIL("expected infeasibility");
  } catch (const PipelineError& e) {
    CHECK(std::string(e.what()).find("90+") != std::string::npos);
  }
}

TEST_CASE("build_incidence rejects microdata categories the marginals lack") {
  const auto sample = make_sample({{{30, "M"}}, {{40, "X"}}});
  io::MarginalSet m;
  m.tables.push_back(table("sex", {{"M", 2}}));
  CHECK_THROWS_AS(ipu::build_incidence(sample, m, BinningConfig{}), InputError);
}

TEST_CASE("ipu_fit: weights already on target are a fixed point") {
  const auto inc = three_household_case();
  const std::vector<double> targets{2, 2};
  const auto fit = ipu::ipu_fit(inc, targets, fit_options(1e-12));
  CHECK(fit.w == std::vector<double>{1, 1, 1});
  CHECK(fit.fit_delta == 0.0);
  CHECK(fit.iterations_used == 0);
  CHECK(fit.converged);
}

TEST_CASE("ipu_fit: single constraint scales in one update") {
  const auto inc = ipu::IncidenceMatrix::from_dense({{1, 1}});
  const std::vector<double> targets{10};
  const auto fit = ipu::ipu_fit(inc, targets, fit_options(0.0, 1));
  REQUIRE(fit.w.size() == 2);
  CHECK(fit.w[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(fit.w[1] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("ipu_fit: three-household case matches the reference weights") {
  const auto inc = three_household_case();
  const std::vector<double> targets{10, 6};
  const auto fit = ipu::ipu_fit(inc, targets, fit_options(1e-6));
  CHECK(fit.converged);
  CHECK(fit.fit_delta <= 1e-6);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::fabs(fit.w[j] - kOracleWeights[j]) / kOracleWeights[j] < 1e-4);
  }
  const auto dev = ipu::relative_deviations(inc, targets, fit.w);
  for (double d : dev) CHECK(d <= 1e-6);
}

TEST_CASE("ipu_fit: scale equivariance") {
  const auto inc = three_household_case();
  const std::vector<double> base{10, 6};
  const std::vector<double> scaled{30, 18};
  const auto a = ipu::ipu_fit(inc, base, fit_options(1e-9, 10000));
  const auto b = ipu::ipu_fit(inc, scaled, fit_options(1e-9, 10000));
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::fabs(b.w[j] - 3 * a.w[j]) / (3 * a.w[j]) < 1e-9);
}

TEST_CASE("ipu_fit: non-convergence keeps the best weights seen") {
  // Person constraints M=10, F=6 and a household constraint demanding 100
  // one-person households cannot all hold.
  const auto inc = ipu::IncidenceMatrix::from_dense({{1, 0, 1}, {0, 1, 1}, {1, 1, 0}});
  const std::vector<double> targets{10, 6, 100};
  std::vector<double> deltas;
  ipu::IpuOptions opt;
  opt.tol = 1e-9;
  opt.max_iter = 50;
  opt.on_epoch = [&](int, std::span<const double> dev) {
    double s = 0;
    for (double d : dev) s += d;
    deltas.push_back(s / static_cast<double>(dev.size()));
  };
  const auto fit = ipu::ipu_fit(inc, targets, opt);
  CHECK_FALSE(fit.converged);
  CHECK(fit.iterations_used == 50);
  CHECK(deltas.size() == 50);
  const double best = *std::min_element(deltas.begin(), deltas.end());
  CHECK(fit.fit_delta <= best);
  const auto dev = ipu::relative_deviations(inc, targets, fit.w);
  double s = 0;
  for (double d : dev) s += d;
  CHECK(s / 3 == doctest::Approx(fit.fit_delta));
}

TEST_CASE("ipu_fit: rejects non-positive targets and empty rows") {
  const auto inc = three_household_case();
  const std::vector<double> zero{10, 0};
  CHECK_THROWS_AS(ipu::ipu_fit(inc, zero), PipelineError);
  const auto empty_row = ipu::IncidenceMatrix::from_dense({{1, 1}, {0, 0}});
  const std::vector<double> t{1, 1};
  CHECK_THROWS_AS(ipu::ipu_fit(empty_row, t), PipelineError);
}

TEST_CASE("sample_households: zero weight is never drawn") {
  const auto sample = make_sample({{{30, "M"}, {28, "F"}}, {{50, "M"}}});
  const std::vector<double> w{1, 0};
  const auto out = ipu::sample_households(w, sample, 4, 7);
  REQUIRE(out.size() == 2);
  for (const auto& t : out) CHECK(t.source == 0);
  CHECK(out[0].household_seq == 1);
  CHECK(out[1].household_seq == 2);
  CHECK(out[0].first_person_seq == 1);
  CHECK(out[1].first_person_seq == 3);
}

TEST_CASE("sample_households: overshoot stops after the crossing household") {
  const auto sample = make_sample({{{30, "M"}, {28, "F"}}, {{50, "M"}, {45, "F"}, {5, "F"}}});
  const std::vector<double> w{1, 1};
  const auto out = ipu::sample_households(w, sample, 1, 3);
  CHECK(out.size() == 1);
}

TEST_CASE("sample_households: equal weights give equal frequencies") {
  const auto sample = make_sample({{{30, "M"}}, {{40, "F"}}});
  const std::vector<double> w{1, 1};
  const auto out = ipu::sample_households(w, sample, 100000, 11);
  REQUIRE(out.size() == 100000);
  std::size_t first = 0;
  for (const auto& t : out) first += t.source == 0;
  CHECK(std::fabs(static_cast<double>(first) / 100000.0 - 0.5) < 0.01);
}

TEST_CASE("sample_households: rejects all-zero weights") {
  const auto sample = make_sample({{{30, "M"}}, {{40, "F"}}});
  const std::vector<double> w{0, 0};
  CHECK_THROWS_AS(ipu::sample_households(w, sample, 10, 1), PipelineError);
}

TEST_CASE("sample_households: deterministic per seed") {
  const auto sample = make_sample({{{30, "M"}}, {{40, "F"}}, {{20, "F"}, {22, "M"}}});
  const std::vector<double> w{1, 2, 3};
  const auto a = ipu::sample_households(w, sample, 5000, 99);
  const auto b = ipu::sample_households(w, sample, 5000, 99);
  const auto c = ipu::sample_households(w, sample, 5000, 100);
  auto sources = [](const auto& v) {
    std::vector<std::size_t> s;
    for (const auto& t : v) s.push_back(t.source);
    return s;
  };
  CHECK(sources(a) == sources(b));
  CHECK(sources(a) != sources(c));
}

TEST_CASE("systematic draws follow the weights") {
  const std::vector<double> w{1, 3, 0, 6};
  ipu::SystematicDrawStream draws(w, {0, 1, 2, 3}, 1000, 5);
  std::vector<std::size_t> counts(4, 0);
  for (int i = 0; i < 100000; ++i) ++counts[draws.next()];
  CHECK(counts[2] == 0);
  CHECK(std::fabs(static_cast<double>(counts[0]) - 10000) <= 100);
  CHECK(std::fabs(static_cast<double>(counts[1]) - 30000) <= 100);
  CHECK(std::fabs(static_cast<double>(counts[3]) - 60000) <= 100);
}

TEST_CASE("fixture: exact fit and sampled marginals at one million persons") {
  test::TempDir dir;
  assemble::FixtureOptions opt;
  opt.target_total = 1e6;
  assemble::write_fixtures(dir.path(), opt);
  const auto sample = io::load_microdata(dir / "individuals.csv", dir / "households.csv");
  const auto marginals = io::load_marginals(dir / "marginals.csv", "Fixture District");
  BinningConfig binning{AgeBins({0, 5, 10, 15, 20, 30, 40, 50, 60, 70})};
  const auto inc = ipu::build_incidence(sample, marginals, binning);
  const auto targets = ipu::constraint_targets(marginals, inc);
  const auto fit = ipu::ipu_fit(inc, targets, fit_options(1e-4));
  CHECK(fit.converged);

  const auto households = ipu::sample_households(fit.w, sample, 1000000, 42);
  std::vector<double> draws(sample.households.size(), 0.0);
  for (const auto& t : households) draws[t.source] += 1.0;
  std::vector<double> counts(inc.constraints.size(), 0.0);
  for (std::size_t i = 0; i < inc.rows.size(); ++i) {
    for (const auto& [j, a] : inc.rows[i]) counts[i] += draws[j] * a;
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    INFO(inc.constraints[i].attribute << "=" << inc.constraints[i].category);
    CHECK(std::fabs(counts[i] - targets[i]) / targets[i] < 0.01);
  }
}

TEST_CASE("sampled households copy their donor whole") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path(), {.base_households = 20, .target_total = 1000, .grid_side = 4});
  const auto sample = io::load_microdata(dir / "individuals.csv", dir / "households.csv");
  std::vector<double> w(sample.households.size(), 1.0);
  ipu::HouseholdStream stream(w, sample, 500, 3);
  std::uint64_t expected_person = 1;
  while (auto t = stream.next()) {
    CHECK(t->size == sample.households[t->source].size());
    CHECK(t->first_person_seq == expected_person);
    expected_person += t->size;
  }
  CHECK(stream.persons_emitted() >= 500);
  CHECK(stream.persons_emitted() == expected_person - 1);
}
