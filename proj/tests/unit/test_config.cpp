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

#include <string>

#include "doctest.h"
#include "support.hpp"
#include "synthpop/assemble/fixtures.hpp"
#include "synthpop/common/error.hpp"
#include "synthpop/config/bind.hpp"
#include "synthpop/config/config.hpp"
#include "synthpop/config/schema.hpp"

using namespace synthpop;
using namespace synthpop::config;
namespace fs = std::filesystem;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parsing: comments, whitespace, later lines win") {
  const auto c = Config::parse("# header\n  rng_seed = 5  # trailing\n\nrng_seed=9\nregion_id = Some Place\n",
                               "/base", "inline");
  CHECK(c.get_uint("rng_seed") == 9);
  CHECK(c.get_string("region_id") == "Some Place");
  CHECK(c.is_set("rng_seed"));
  CHECK_FALSE(c.is_set("threads"));
  CHECK(c.get_uint("threads") == 0);  // schema default
  CHECK(c.get_double("ipu.tol") == 0.001);
}

TEST_CASE("parsing errors carry the origin and line") {
  auto msg = error_of([] { Config::parse("rng_seed = 1\nno equals sign\n", ".", "a.cfg"); });
  CHECK(msg.find("a.cfg:2") != std::string::npos);
  msg = error_of([] { Config::parse("ipu.toll = 1\n", ".", "a.cfg"); });
  CHECK(msg.find("unknown config key 'ipu.toll'") != std::string::npos);
  msg = error_of([] { Config::parse("n_workplaces = -3\n", ".", "a.cfg"); });
  CHECK(msg.find("n_workplaces") != std::string::npos);
  msg = error_of([] { Config::parse("schema_version = 2\n", ".", "a.cfg"); });
  CHECK(msg.find("schema_version") != std::string::npos);
}

TEST_CASE("value types are checked") {
  auto check = [](std::string_view key, std::string_view value) { check_value(*find_key(key), value); };
  CHECK_NOTHROW(check("ipu.tol", "1e-6"));
  CHECK_THROWS_AS(check("ipu.tol", "tiny"), InputError);
  CHECK_THROWS_AS(check("ipu.tol", "inf"), InputError);
  CHECK_NOTHROW(check("eval.plots", "false"));
  CHECK_THROWS_AS(check("eval.plots", "yes"), InputError);
  CHECK_NOTHROW(check("decay.form", "exponential"));
  CHECK_THROWS_AS(check("decay.form", "gravity"), InputError);
  CHECK_NOTHROW(check("binning.age_edges", "0, 10, 20"));
  CHECK_THROWS_AS(check("binning.age_edges", "0,ten"), InputError);
  CHECK_NOTHROW(check("epi.lockdown_threshold", "0.01, 0.05, none"));
  CHECK_THROWS_AS(check("epi.lockdown_threshold", "0.01, 2"), InputError);
  CHECK_NOTHROW(check("epi.beta", "0:0.1, 18:0.2"));
  CHECK_THROWS_AS(check("epi.beta", "0-0.1"), InputError);
  CHECK_THROWS_AS(check("eval.ks_columns", "Age,,Height"), InputError);
}

TEST_CASE("include splices files and resolves paths per file") {
  test::TempDir dir;
  test::write_text(dir / "shared" / "base.cfg", "rng_seed = 3\ninput.grid = grid.csv\n");
  const auto top = test::write_text(dir / "top.cfg", "include = shared/base.cfg\nrng_seed = 4\n");
  const auto c = Config::load(top);
  CHECK(c.get_uint("rng_seed") == 4);
  CHECK(*c.get_path("input.grid") == (dir / "shared" / "grid.csv").lexically_normal());
  CHECK_FALSE(c.get_path("input.admin_units"));
  const auto msg = error_of([&] { (void)c.require_path("input.polygon"); });
  CHECK(msg.find("input.polygon") != std::string::npos);
}

TEST_CASE("include cycles and missing files are reported") {
  test::TempDir dir;
  test::write_text(dir / "a.cfg", "include = b.cfg\n");
  test::write_text(dir / "b.cfg", "include = a.cfg\n");
  CHECK(error_of([&] { Config::load(dir / "a.cfg"); }).find("include cycle") != std::string::npos);
  test::write_text(dir / "c.cfg", "include = nowhere.cfg\n");
  CHECK(error_of([&] { Config::load(dir / "c.cfg"); }).find("nowhere.cfg") != std::string::npos);
  CHECK_THROWS_AS(Config::load(dir / "absent.cfg"), InputError);
}

TEST_CASE("overrides") {
  auto c = Config::parse("rng_seed = 1\n", "/base", "inline");
  c.apply_override("rng_seed=7");
  CHECK(c.get_uint("rng_seed") == 7);
  c.apply_override(" epi.n_runs = 3 ");
  CHECK(c.get_uint("epi.n_runs") == 3);
  CHECK_THROWS_AS(c.apply_override("rng_seed"), InputError);
  CHECK_THROWS_AS(c.apply_override("nonsense=1"), InputError);
  c.apply_override("input.grid=rel/grid.csv");
  CHECK(*c.get_path("input.grid") == (fs::current_path() / "rel/grid.csv").lexically_normal());
}

TEST_CASE("canonical form ignores output location and thread count") {
  auto a = Config::parse("rng_seed = 2\nthreads = 1\noutput.dir = x\n", "/base", "inline");
  auto b = Config::parse("output.dir = y\nthreads = 4\nrng_seed=2\n", "/base", "inline");
  CHECK(a.canonical(kGenerate) == b.canonical(kGenerate));
  CHECK(a.canonical(kGenerate).find("output.dir") == std::string::npos);
  b.apply_override("rng_seed=3");
  CHECK(a.canonical(kGenerate) != b.canonical(kGenerate));
  // Keys of other commands do not enter.
  CHECK(a.canonical(kSimulate).find("ipu.tol") == std::string::npos);
}

TEST_CASE("schema help lists the keys of a command") {
  const auto gen = schema_help(kGenerate);
  for (const char* key : {"input.grid", "ipu.tol", "decay.form", "rng_seed"}) CHECK(gen.find(key) != std::string::npos);
  CHECK(gen.find("epi.beta") == std::string::npos);
  const auto sim = schema_help(kSimulate);
  CHECK(sim.find("epi.lockdown_threshold") != std::string::npos);
  for (const auto& k : schema()) CHECK(find_key(k.key) == &k);
  for (const auto& k : schema()) {
    if (!k.default_value.empty()) CHECK_NOTHROW(check_value(k, k.default_value));
  }
}

TEST_CASE("binding the fixture configs") {
  test::TempDir dir;
  assemble::write_fixtures(dir.path(), {.base_households = 10, .target_total = 1000, .grid_side = 6});
  const auto gen = generation_config(Config::load(dir / "generate.cfg"));
  CHECK(gen.region_id == "Fixture District");
  CHECK(gen.region_code == 519);
  CHECK(gen.rng_seed == 42);
  CHECK(gen.grid == (dir / "grid.csv").lexically_normal());
  CHECK(gen.ipu_tol == 1e-6);
  CHECK(gen.n_workplaces == 400);

  const auto eval = evaluation_config(Config::load(dir / "evaluate.cfg"));
  CHECK(eval.population == (dir / "generated" / "population.csv").lexically_normal());
  CHECK(eval.ks_columns == std::vector<std::string>{"Age", "Height", "Weight"});

  const auto sim = simulation_job(Config::load(dir / "simulate.cfg"));
  REQUIRE(sim.thresholds.size() == 3);
  CHECK(sim.thresholds[0] == 0.01);
  CHECK(sim.thresholds[1] == 0.02);
  CHECK_FALSE(sim.thresholds[2]);
  CHECK(sim.epi.beta_by_age.size() == 3);
  CHECK(sim.epi.beta_for(70) == 0.4);
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
