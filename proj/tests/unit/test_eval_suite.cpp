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
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "synthpop/assemble/fixtures.hpp"
#include "synthpop/attr/stratified_resampler.hpp"
#include "synthpop/common/csv.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/common/rng.hpp"
#include "synthpop/eval/efficacy.hpp"
#include "synthpop/eval/evaluate.hpp"
#include "synthpop/eval/metrics.hpp"
#include "synthpop/eval/plots.hpp"
#include "synthpop/io/microdata.hpp"

using namespace synthpop;
using namespace synthpop::eval;

namespace {

std::vector<std::string> repeat(const std::vector<std::pair<std::string, int>>& counts) {
  std::vector<std::string> out;
  for (const auto& [c, n] : counts) out.insert(out.end(), static_cast<std::size_t>(n), c);
  return out;
}

BodyTable body_from(const io::MicroSample& s) {
  BodyTable t;
  for (const auto& p : s.persons) {
    if (p.height && p.weight) t.push(p.age, p.sex, *p.height, *p.weight);
  }
  return t;
}

std::size_t count_lines(const std::filesystem::path& p) {
  const auto text = test::read_text(p);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("ks_score: identical, disjoint and hand-computed samples") {
  const std::vector<double> a{1, 2, 3, 4};
  CHECK(ks_score(a, a) == 1.0);
  const std::vector<double> lo{0.1, 0.5, 0.9};
  const std::vector<double> hi{2.0, 2.5, 3.0};
  CHECK(ks_score(lo, hi) == 0.0);
  const std::vector<double> b{1, 2, 3, 10};
  CHECK(ks_score(a, b) == doctest::Approx(0.75));
  const std::vector<double> none;
  CHECK_THROWS_AS(ks_score(none, a), InputError);
}

TEST_CASE("ks_score: symmetric and invariant under increasing transforms") {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> n1(0.0, 1.0), n2(0.3, 1.2);
  std::vector<double> x(700), y(900);
  for (auto& v : x) v = n1(gen);
  for (auto& v : y) v = n2(gen);
  CHECK(ks_score(x, y) == ks_score(y, x));
  std::vector<double> ex(x.size()), ey(y.size());
  std::transform(x.begin(), x.end(), ex.begin(), [](double v) { return std::exp(v); });
  std::transform(y.begin(), y.end(), ey.begin(), [](double v) { return std::exp(v); });
  CHECK(ks_score(ex, ey) == ks_score(x, y));
  const double s = ks_score(x, y);
  CHECK(s >= 0.0);
  CHECK(s <= 1.0);
}

TEST_CASE("ks_score: ties are stepped together") {
  const std::vector<double> a{1, 1, 1, 2};
  const std::vector<double> b{1, 2, 2, 2};
  // ECDFs after 1: 0.75 vs 0.25
  CHECK(ks_score(a, b) == doctest::Approx(0.5));
}

TEST_CASE("chi-square survival function against closed forms") {
  // df 1: P(X > x) = erfc(sqrt(x / 2)); df 2: exp(-x / 2)
  CHECK(chi_square_sf(3.84, 1) == doctest::Approx(std::erfc(std::sqrt(3.84 / 2))).epsilon(1e-12));
  CHECK(std::fabs(chi_square_sf(3.84, 1) - 0.050) <= 0.001);
  for (double x : {0.1, 1.0, 5.0, 20.0}) {
    CHECK(chi_square_sf(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-12));
  }
  CHECK(chi_square_sf(0.0, 3) == 1.0);
}

TEST_CASE("chi-square: proportional samples give p = 1") {
  const auto real = repeat({{"M", 30}, {"F", 20}});
  const auto synth = repeat({{"M", 300}, {"F", 200}});
  const auto r = chi_square_test(real, synth);
  CHECK(r.statistic == 0.0);
  CHECK(r.df == 1);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("chi-square: skewed synthetic sample is rejected") {
  const auto real = repeat({{"a", 2500}, {"b", 2500}, {"c", 2500}, {"d", 2500}});
  const auto synth = repeat({{"a", 7000}, {"b", 1000}, {"c", 1000}, {"d", 1000}});
  CHECK(chi_square_pvalue(real, synth) < 1e-6);
}

TEST_CASE("chi-square: synthetic-only categories merge; one category is an error") {
  const auto real = repeat({{"M", 60}, {"F", 40}});
  const auto synth = repeat({{"M", 60}, {"F", 35}, {"X", 5}});
  const auto r = chi_square_test(real, synth);
  CHECK(r.merged_categories == 1);
  CHECK(r.df == 1);
  CHECK(r.statistic == doctest::Approx(0.0));  // X folds into F (smallest)
  const auto only = repeat({{"M", 10}});
  CHECK_THROWS_AS(chi_square_test(only, only), InputError);
}

TEST_CASE("chi-square calibration: resamples of the real sample rarely look different") {
  const auto real = repeat({{"a", 500}, {"b", 300}, {"c", 150}, {"d", 50}});
  int low = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Rng rng(seed);
    std::vector<std::string> synth(10000);
    for (auto& s : synth) s = real[uniform_index(rng, real.size())];
    low += chi_square_pvalue(real, synth) <= 0.01;
  }
  CHECK(low <= 6);  // binomial(200, 0.01): P(X > 6) < 0.5%
}

TEST_CASE("quantiles interpolate linearly between order statistics") {
  std::vector<double> v(100);
  std::iota(v.begin(), v.end(), 1.0);
  std::shuffle(v.begin(), v.end(), std::mt19937(1));
  const auto q = quartiles(v);
  CHECK(q[0] == doctest::Approx(25.75));
  CHECK(q[1] == doctest::Approx(50.5));
  CHECK(q[2] == doctest::Approx(75.25));
  CHECK(quantile({5.0}, 0.3) == 5.0);
  CHECK_THROWS_AS(quantile({}, 0.5), InputError);
}

TEST_CASE("r2 score") {
  const std::vector<double> y{1, 2, 3, 4};
  CHECK(r2_score(y, y) == 1.0);
  const std::vector<double> mean(4, 2.5);
  CHECK(r2_score(y, mean) == doctest::Approx(0.0));
  const std::vector<double> flat(4, 1.0);
  CHECK_THROWS_AS(r2_score(flat, y), InputError);
}

TEST_CASE("ml_efficacy: identical training sets score identically") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path());
  const auto table = body_from(io::load_microdata(dir / "individuals.csv", dir / "households.csv"));
  std::vector<std::size_t> train, test_rows;
  for (std::size_t i = 0; i < table.size(); ++i) (i % 3 ? train : test_rows).push_back(i);
  const auto tr = table.subset(train);
  const auto te = table.subset(test_rows);
  MlpOptions small;
  small.epochs = 10;
  for (const auto target : {Target::kHeight, Target::kWeight}) {
    for (const auto model : {ModelKind::kLinear, ModelKind::kMlp}) {
      const auto s = ml_efficacy(tr, te, tr, target, model, small);
      CHECK(s.real_trained == s.synth_trained);
      CHECK(s.gap() == 0.0);
    }
  }
}

TEST_CASE("ml_efficacy: exact linear target scores one") {
  BodyTable t;
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const double age = 20 + 50 * u(gen);
    const std::string sex = u(gen) < 0.5 ? "F" : "M";
    const double height = 150 + 30 * u(gen);
    t.push(age, sex, height, 0.4 * height - 0.1 * age + (sex == "M" ? 5.0 : 0.0) - 10.0);
  }
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < t.size(); ++i) (i < 200 ? a : b).push_back(i);
  const auto s = ml_efficacy(t.subset(a), t.subset(b), t.subset(a), Target::kWeight, ModelKind::kLinear);
  CHECK(s.real_trained == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.synth_trained == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("closed-form least squares matches gradient-trained linear model") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path());
  const auto table = body_from(io::load_microdata(dir / "individuals.csv", dir / "households.csv"));
  const FeatureEncoder enc(table, Target::kWeight);
  std::vector<std::vector<double>> x;
  for (std::size_t i = 0; i < table.size(); ++i) x.push_back(enc.features(table, i));
  const auto y = FeatureEncoder::target(table, Target::kWeight);
  LinearModel ols;
  ols.fit(x, y);
  MlpOptions gd;
  gd.hidden = 0;
  gd.batch_size = 0;
  gd.epochs = 20000;
  gd.learning_rate = 0.05;
  gd.momentum = 0.9;
  Mlp linear_gd(gd);
  linear_gd.fit(x, y);
  double worst = 0.0;
  for (const auto& row : x) worst = std::max(worst, std::fabs(ols.predict(row) - linear_gd.predict(row)));
  CHECK(worst < 1e-6);
}

TEST_CASE("ml_efficacy on resampled bodies stays close to the real-trained score") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path());
  const auto sample = io::load_microdata(dir / "individuals.csv", dir / "households.csv");
  const auto table = body_from(sample);
  attr::StratifiedResampler gen;
  gen.fit(sample);
  BodyTable synth;
  Rng rng(1);
  for (int i = 0; i < 20000; ++i) {
    const auto& p = sample.persons[static_cast<std::size_t>(i) % sample.persons.size()];
    const auto d = gen.sample(p.age, p.sex, rng);
    if (d.height && d.weight) synth.push(p.age, p.sex, *d.height, *d.weight);
  }
  std::vector<std::size_t> train, test_rows;
  for (std::size_t i = 0; i < table.size(); ++i) (i % 10 < 7 ? train : test_rows).push_back(i);
  const auto s =
      ml_efficacy(table.subset(train), table.subset(test_rows), synth, Target::kWeight, ModelKind::kLinear);
  CHECK(s.gap() <= 0.05);
}

TEST_CASE("histograms count every value once") {
  std::vector<double> real, synth;
  for (int i = 0; i < 1000; ++i) real.push_back(i % 97);
  for (int i = 0; i < 700; ++i) synth.push_back((i * 7) % 101);
  const auto bins = histogram(real, synth, 5.0);
  std::size_t r = 0, s = 0;
  for (const auto& b : bins) {
    CHECK(b.upper - b.lower == 5.0);
    CHECK(std::fmod(b.lower, 5.0) == 0.0);
    r += b.real;
    s += b.synth;
  }
  CHECK(r == 1000);
  CHECK(s == 700);
}

TEST_CASE("scatter subsample is capped, seeded and sorted") {
  const auto a = subsample(1000000, 10000, 3);
  CHECK(a.size() == 10000);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::set<std::size_t>(a.begin(), a.end()).size() == 10000);
  CHECK(a == subsample(1000000, 10000, 3));
  CHECK(a != subsample(1000000, 10000, 4));
  CHECK(subsample(50, 100, 3).size() == 50);
}

TEST_CASE("plot data export") {
  test::TempDir dir;
  NumericTable real{{"Age", {}}, {"Height", {}}};
  NumericTable synth{{"Age", {}}, {"Height", {}}};
  for (int i = 0; i < 500; ++i) {
    real["Age"].push_back(i % 90);
    real["Height"].push_back(i % 7 == 0 ? std::nan("") : 100 + i % 80);
    synth["Age"].push_back((i * 3) % 90);
    synth["Height"].push_back(110 + i % 70);
  }
  const std::vector<std::string> cols{"Age", "Height"};
  PlotOptions opt;
  opt.scatter_cap = 100;
  export_plot_data(real, synth, cols, dir.path(), opt);
  for (const char* f : {"histogram_Age.csv", "histogram_Height.csv", "summary.csv", "scatter_Age_Height.csv"}) {
    CHECK(std::filesystem::exists(dir / f));
  }
  CHECK(count_lines(dir / "scatter_Age_Height.csv") == 1 + 100 + 100);
  const std::vector<std::string> bad{"Age", "Shoe"};
  try {
    export_plot_data(real, synth, bad, dir.path(), opt);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("Shoe") != std::string::npos);
  }
}

TEST_CASE("evaluate: a source file against itself scores perfectly") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path());
  EvalConfig cfg;
  cfg.population = dir / "individuals.csv";
  cfg.individuals = dir / "individuals.csv";
  cfg.out_dir = dir / "eval";
  cfg.mlp.epochs = 5;
  const auto report = evaluate(cfg);
  for (const auto& [c, s] : report.ks_scores) CHECK(s == 1.0);
  for (const auto& [c, p] : report.chi2_pvalues) CHECK(p == 1.0);
  CHECK(report.efficacy.size() == 4);
  const auto text = test::read_text(dir / "eval" / "report.txt");
  CHECK(text.find("ks.Age = 1.000000") != std::string::npos);
  CHECK(text.find("chi2_p.SexLabel = 1.000000") != std::string::npos);
  CHECK(text == format_report(report));
  CHECK(std::filesystem::exists(dir / "eval" / "plots" / "summary.csv"));
}

TEST_CASE("evaluate: a missing column is named") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path());
  EvalConfig cfg;
  cfg.population = dir / "individuals.csv";
  cfg.individuals = dir / "individuals.csv";
  cfg.out_dir = dir / "eval";
  cfg.ks_columns = {"Age", "ShoeSize"};
  cfg.efficacy = false;
  try {
    evaluate(cfg);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("ShoeSize") != std::string::npos);
  }
}
