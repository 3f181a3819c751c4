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

#include "synthpop/assemble/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "synthpop/attr/job_table.hpp"
#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/numfmt.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/io/microdata.hpp"
#include "synthpop/ipu/binning.hpp"

namespace synthpop::assemble {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFixtureSeed = 20260101;
const std::vector<int> kAgeEdges = {0, 5, 10, 15, 20, 30, 40, 50, 60, 70};

struct Choice {
  const char* label;
  double weight;
  int id = 0;
};

const std::array<Choice, 4> kReligions = {{{"Hindu", 0.68}, {"Muslim", 0.2}, {"Christian", 0.05}, {"Buddhist", 0.07}}};
const std::array<Choice, 4> kCastes = {{{"General", 0.35}, {"OBC", 0.35}, {"SC", 0.2}, {"ST", 0.1}}};
const std::array<Choice, 10> kAdultJobs = {{{"Homebound", 0.26, 0},
                                            {"Teacher", 0.08, 15},
                                            {"Carpenters", 0.05, 81},
                                            {"Construction", 0.1, 95},
                                            {"Labour nec", 0.12, 99},
                                            {"Clerks", 0.08, 30},
                                            {"Sales workers", 0.1, 43},
                                            {"Drivers", 0.07, 98},
                                            {"Cultivators", 0.08, 61},
                                            {"Nurses", 0.06, 7}}};
const std::array<double, 8> kSizeWeights = {0.07, 0.12, 0.16, 0.23, 0.18, 0.12, 0.07, 0.05};  // sizes 1..8

template <typename Array>
const Choice& pick(const Array& choices, Rng& rng) {
  double total = 0.0;
  for (const auto& c : choices) total += c.weight;
  double u = uniform01(rng) * total;
  for (const auto& c : choices) {
    if (u < c.weight) return c;
    u -= c.weight;
  }
  return choices.back();
}

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

struct Person {
  int age = 0;
  bool male = true;
  std::optional<double> height;
  std::optional<double> weight;
  std::string job;
  int job_id = 0;
  io::Comorbidities flags{};
};

struct Household {
  std::string religion;
  std::string caste;
  std::string psu;
  std::vector<Person> members;
};

// Height follows a saturating growth curve towards a sex-specific adult mean,
// with a slow decline after 50; weight comes from an age-dependent BMI.
void body(Person& p, Rng& rng) {
  const double adult = p.male ? 164.0 : 152.0;
  const double a = static_cast<double>(p.age);
  double h;
  if (p.age < 18) {
    const double g = (1.0 - std::exp(-(a + 1.0) / 6.0)) / (1.0 - std::exp(-19.0 / 6.0));
    h = 55.0 + (adult - 55.0) * g + standard_normal(rng) * (2.0 + 0.3 * a);
  } else {
    h = adult + standard_normal(rng) * (p.male ? 7.0 : 6.0) - 0.12 * std::max(0.0, a - 50.0);
  }
  double bmi = p.age < 18 ? 15.5 + 0.15 * a : 20.0 + 0.08 * std::min(a - 18.0, 35.0);
  bmi += standard_normal(rng) * (p.age < 18 ? 1.2 : 2.8);
  bmi = std::max(bmi, 12.0);
  h = std::max(h, 45.0);
  const double w = bmi * (h / 100.0) * (h / 100.0);
  p.height = std::round(h * 100.0) / 100.0;
  p.weight = std::round(w * 100.0) / 100.0;
  if (uniform01(rng) < 0.02) p.height.reset();
  if (uniform01(rng) < 0.02) p.weight.reset();
}

void job(Person& p, Rng& rng) {
  if (p.age < attr::kStudentAge) {
    p.job = attr::kHomeboundLabel;
    p.job_id = attr::kHomeboundId;
  } else if (p.age < attr::kAdultAge) {
    p.job = attr::kStudentLabel;
    p.job_id = attr::kStudentId;
  } else if (p.age >= 65 && uniform01(rng) < 0.7) {
    p.job = attr::kHomeboundLabel;
    p.job_id = attr::kHomeboundId;
  } else {
    const auto& c = pick(kAdultJobs, rng);
    p.job = c.label;
    p.job_id = c.id;
  }
}

// Comorbidities share a latent risk that grows with age and BMI, so the flags
// co-occur the way chronic conditions do.
void comorbidities(Person& p, Rng& rng) {
  const double bmi = (p.height && p.weight) ? *p.weight / std::pow(*p.height / 100.0, 2) : 21.0;
  const double risk = p.age / 80.0 + std::max(0.0, bmi - 25.0) / 15.0 + 0.3 * standard_normal(rng);
  auto flag = [&](double prob) { return uniform01(rng) < std::clamp(prob, 0.0, 1.0); };
  auto& f = p.flags;
  f[0] = flag(0.05);                                   // fever
  f[1] = flag(p.age < 5 ? 0.08 : 0.03);                // diarrhea
  f[2] = flag(p.age > 50 ? 0.15 : 0.005);              // cataract
  f[4] = flag(0.01 + 0.1 * std::max(0.0, risk));       // diabetes
  f[3] = flag(f[4] ? 0.35 : 0.01 + 0.05 * std::max(0.0, risk));  // heart disease
  f[5] = flag(0.002);                                  // leprosy
  f[6] = flag(0.003 + 0.01 * std::max(0.0, risk));     // cancer
  f[7] = flag(0.03);                                   // asthma
  f[8] = flag(f[3] ? 0.05 : 0.004);                    // paralysis
  f[9] = flag(0.005);                                  // epilepsy
}

Household make_household(Rng& rng, std::size_t index) {
  Household hh;
  hh.religion = pick(kReligions, rng).label;
  hh.caste = pick(kCastes, rng).label;
  hh.psu = "PSU" + std::to_string(index / 10 + 1);

  double u = uniform01(rng);
  std::size_t size = kSizeWeights.size();
  for (std::size_t k = 0; k < kSizeWeights.size(); ++k) {
    if (u < kSizeWeights[k]) {
      size = k + 1;
      break;
    }
    u -= kSizeWeights[k];
  }

  Person head;
  head.age = uniform_int(rng, 21, 75);
  head.male = uniform01(rng) < 0.8;
  hh.members.push_back(head);
  if (size >= 2) {
    Person spouse;
    spouse.age = std::clamp(head.age + uniform_int(rng, -8, 4), 18, 90);
    spouse.male = !head.male;
    hh.members.push_back(spouse);
  }
  while (hh.members.size() < size) {
    Person m;
    m.male = uniform01(rng) < 0.5;
    if (uniform01(rng) < 0.15) {
      m.age = uniform_int(rng, 55, 92);
    } else {
      m.age = uniform_int(rng, 0, std::clamp(head.age - 17, 1, 30));
    }
    hh.members.push_back(m);
  }
  return hh;
}

void finish_members(Household& hh, Rng& rng) {
  for (auto& p : hh.members) {
    body(p, rng);
    job(p, rng);
    comorbidities(p, rng);
  }
}

std::string num(double v) { return format_double(v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw PipelineError("cannot write " + path.string());
}

}  // namespace

FixtureSummary write_fixtures(const fs::path& out_dir, const FixtureOptions& options) {
  if (options.base_households < 1) throw InputError("fixture needs at least one household");
  if (!(options.target_total > 0.0)) throw InputError("fixture target total must be > 0");
  if (options.grid_side < 2) throw InputError("fixture grid needs at least 2x2 cells");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw PipelineError("cannot create " + out_dir.string() + ": " + ec.message());

  Rng rng = make_rng(kFixtureSeed, Stream::kFixture);
  std::vector<Household> households;
  std::vector<double> weights;
  for (std::size_t i = 0; i < options.base_households; ++i) {
    Household base = make_household(rng, 2 * i);
    Household twin = base;
    twin.psu = "PSU" + std::to_string((2 * i + 1) / 10 + 1);
    for (auto& p : twin.members) p.male = !p.male;
    finish_members(base, rng);
    finish_members(twin, rng);
    const double w = 0.7 + 0.7 * uniform01(rng);
    households.push_back(std::move(base));
    households.push_back(std::move(twin));
    weights.push_back(w);
    weights.push_back(w);
  }

  // Students need schools, and schools are Teacher workplaces: the first
  // household head always teaches, however small the fixture.
  households[0].members[0].job = attr::kTeacherLabel;
  households[0].members[0].job_id = 15;

  FixtureSummary summary;
  summary.households = households.size();
  summary.true_weights = weights;

  // Microdata.
  {
    CsvWriter hh_out(out_dir / "households.csv");
    hh_out.write_row({"HHID", "PSUID", "Religion", "Caste", "HouseholdSize"});
    CsvWriter p_out(out_dir / "individuals.csv");
    std::vector<std::string> header = {"Agent_ID", "HHID",   "Age",      "SexLabel", "Religion",
                                       "Caste",    "Height", "Weight",   "JobLabel", "JobID"};
    for (auto c : io::kComorbidityColumns) header.emplace_back(c);
    p_out.write_row(header);
    std::size_t person_seq = 0;
    for (std::size_t h = 0; h < households.size(); ++h) {
      const auto& hh = households[h];
      const std::string hhid = "H" + std::to_string(h + 1);
      hh_out.write_row({hhid, hh.psu, hh.religion, hh.caste, std::to_string(hh.members.size())});
      for (const auto& p : hh.members) {
        std::vector<std::string> row = {"P" + std::to_string(++person_seq),
                                        hhid,
                                        std::to_string(p.age),
                                        p.male ? "M" : "F",
                                        hh.religion,
                                        hh.caste,
                                        p.height ? num(*p.height) : "NA",
                                        p.weight ? num(*p.weight) : "NA",
                                        p.job,
                                        std::to_string(p.job_id)};
        for (bool f : p.flags) row.push_back(f ? "1" : "0");
        p_out.write_row(row);
      }
    }
    summary.persons = person_seq;
    hh_out.close();
    p_out.close();
  }

  // Marginals: true weights applied to the sample, scaled to target_total.
  {
    BinningConfig binning;
    binning.age_bins = AgeBins(kAgeEdges);
    double weighted_persons = 0.0;
    for (std::size_t h = 0; h < households.size(); ++h) {
      weighted_persons += weights[h] * static_cast<double>(households[h].members.size());
    }
    summary.scale = options.target_total / weighted_persons;

    std::vector<std::pair<std::string, std::map<std::string, double>>> tables = {
        {"age_group", {}}, {"sex", {}}, {"religion", {}}, {"caste", {}}, {"household_size", {}}};
    for (std::size_t a = 0; a < binning.age_bins.size(); ++a) tables[0].second[binning.age_bins.label(a)] = 0.0;
    for (std::size_t h = 0; h < households.size(); ++h) {
      const auto& hh = households[h];
      const double w = weights[h] * summary.scale;
      for (const auto& p : hh.members) {
        tables[0].second[binning.age_bins.label_for(p.age)] += w;
        tables[1].second[p.male ? "M" : "F"] += w;
        tables[2].second[hh.religion] += w;
        tables[3].second[hh.caste] += w;
      }
      tables[4].second[binning.household_size_label(hh.members.size())] += w;
    }
    CsvWriter out(out_dir / "marginals.csv");
    out.write_row({"region", "attribute", "category", "count"});
    for (const auto& [attribute, counts] : tables) {
      // Categories nobody falls in are left out: a zero target has no solution.
      for (const auto& [category, count] : counts) {
        if (count > 0.0) out.write_row({"Fixture District", attribute, category, num(count)});
      }
    }
    out.close();
  }

  // Grid: two density bumps over a grid_side x grid_side lattice.
  const std::size_t n = options.grid_side;
  const double s = kFixtureCellSize;
  {
    CsvWriter out(out_dir / "grid.csv");
    out.write_row({"X", "Y", "Z"});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        const double y = static_cast<double>(j) / static_cast<double>(n - 1);
        const double bump = 9000.0 * std::exp(-((x - 0.3) * (x - 0.3) + (y - 0.35) * (y - 0.35)) / 0.05) +
                            5000.0 * std::exp(-((x - 0.75) * (x - 0.75) + (y - 0.7) * (y - 0.7)) / 0.03);
        double z = std::round(bump + 200.0 * uniform01(rng));
        if ((i * 7 + j * 3) % 23 == 0) z = 0.0;  // a few empty cells
        out.write_row({num(kFixtureOriginLat + static_cast<double>(i) * s),
                       num(kFixtureOriginLon + static_cast<double>(j) * s), num(z)});
      }
    }
    out.close();
    summary.grid_cells = n * n;
  }

  // Region: an octagon around the lattice. Its corner cuts pass 0.2 cells
  // beyond the corner centers, so every center is inside while parts of the
  // corner cells are not, which exercises the rejection step.
  {
    const double lat0 = kFixtureOriginLat - 0.3 * s;
    const double lon0 = kFixtureOriginLon - 0.3 * s;
    const double span = (static_cast<double>(n) - 1.0 + 0.6) * s;
    const double cut = 0.4 * s;
    const std::vector<std::pair<double, double>> ring = {
        {lat0 + cut, lon0},         {lat0 + span - cut, lon0},  {lat0 + span, lon0 + cut},
        {lat0 + span, lon0 + span - cut}, {lat0 + span - cut, lon0 + span}, {lat0 + cut, lon0 + span},
        {lat0, lon0 + span - cut},  {lat0, lon0 + cut}};
    std::string text = "{\"type\": \"Feature\", \"properties\": {\"name\": \"Fixture District\"},\n";
    text += " \"geometry\": {\"type\": \"Polygon\", \"coordinates\": [[";
    for (std::size_t k = 0; k <= ring.size(); ++k) {
      const auto& v = ring[k % ring.size()];
      if (k) text += ", ";
      text += "[" + num(v.second) + ", " + num(v.first) + "]";  // [lon, lat]
    }
    text += "]]}}\n";
    write_text(out_dir / "region.geojson", text);
  }

  {
    CsvWriter out(out_dir / "admin_units.csv");
    out.write_row({"name", "lat", "lon"});
    const double span = static_cast<double>(n - 1) * s;
    const std::array<std::pair<double, double>, 5> centers = {
        {{0.2, 0.2}, {0.2, 0.8}, {0.5, 0.5}, {0.8, 0.2}, {0.8, 0.8}}};
    const std::array<const char*, 5> names = {"Ward A", "Ward B", "Ward C", "Ward D", "Ward E"};
    for (std::size_t k = 0; k < centers.size(); ++k) {
      out.write_row({names[k], num(kFixtureOriginLat + centers[k].first * span),
                     num(kFixtureOriginLon + centers[k].second * span)});
    }
    out.close();
  }

  std::string edges;
  for (std::size_t k = 0; k < kAgeEdges.size(); ++k) edges += (k ? "," : "") + std::to_string(kAgeEdges[k]);

  write_text(out_dir / "common.cfg",
             "# Settings shared by every fixture config.\n"
             "schema_version = 1\n"
             "rng_seed = 42\n");
  write_text(out_dir / "generate.cfg",
             "include = common.cfg\n"
             "region_id = Fixture District\n"
             "region_code = 519\n"
             "input.individuals = individuals.csv\n"
             "input.households = households.csv\n"
             "input.marginals = marginals.csv\n"
             "input.grid = grid.csv\n"
             "input.polygon = region.geojson\n"
             "input.admin_units = admin_units.csv\n"
             "binning.age_edges = " + edges + "\n"
             "sampler.cell_size = " + num(s) + "\n"
             "ipu.tol = 1e-6\n"
             "n_workplaces = 400\n"
             "n_public_places = 200\n"
             "output.dir = generated\n");
  write_text(out_dir / "evaluate.cfg",
             "include = common.cfg\n"
             "eval.population = generated/population.csv\n"
             "eval.individuals = individuals.csv\n"
             "output.dir = evaluation\n");
  write_text(out_dir / "simulate.cfg",
             "include = common.cfg\n"
             "epi.population = generated/population.csv\n"
             "epi.lockdown_threshold = 0.01, 0.02, none\n"
             "output.dir = simulation\n");
  return summary;
}

}  // namespace synthpop::assemble
