// Copyright 2026 The phc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "phc/cli.hpp"
#include "phc/csv_io.hpp"
#include "phc/scenario.hpp"
#include "support.hpp"

using namespace phc;
using phc::cli::dispatch;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string scenario(const char* name) { return (testing::source_dir() / "scenarios" / name).string(); }

}  // namespace

TEST_CASE("gen-scenario output loads back") {
  const auto dir = testing::scratch_dir("cli_gen");
  const auto out = (dir / "s.json").string();
  const auto r = dispatch({"gen-scenario", "--images", "3", "--instances", "6", "--seed", "1", "--out", out});
  REQUIRE(r.exit_code == 0);
  const Application app = load_scenario(out);
  CHECK(app.images.size() == 3);
  CHECK(app.instances.size() == 6);
}

TEST_CASE("PHC_SEED is the seed fallback") {
  const auto dir = testing::scratch_dir("cli_env");
  REQUIRE(dispatch({"gen-scenario", "--seed", "5", "--out", (dir / "a.json").string()}).exit_code == 0);
  ::setenv("PHC_SEED", "5", 1);
  const auto r = dispatch({"gen-scenario", "--out", (dir / "b.json").string()});
  ::unsetenv("PHC_SEED");
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
}

TEST_CASE("allocate exit codes on golden files") {
  const auto dir = testing::scratch_dir("cli_alloc");
  const auto base = dispatch({"allocate", "--scenario", scenario("vtb.json"), "--method", "baseline", "--out",
                              (dir / "b").string()});
  CHECK(base.exit_code == 2);
  CHECK(std::filesystem::exists(dir / "b" / "allocation.json"));
  const auto appr = dispatch({"allocate", "--scenario", scenario("vtb.json"), "--method", "approach", "--out",
                              (dir / "a").string()});
  CHECK(appr.exit_code == 0);
  CHECK(slurp(dir / "a" / "front.csv").rfind("solution_id,f1,f2,f3,assignments_json\n", 0) == 0);
}

TEST_CASE("compare twice gives identical bytes") {
  const auto dir = testing::scratch_dir("cli_compare");
  for (const char* sub : {"r1", "r2"}) {
    const auto r = dispatch({"compare", "--scenario", scenario("normal.json"), "--presets", "all", "--seeds", "1..3",
                             "--out", (dir / sub).string()});
    REQUIRE(r.exit_code == 0);
  }
  CHECK(slurp(dir / "r1" / "report.json") == slurp(dir / "r2" / "report.json"));
  CHECK(slurp(dir / "r1" / "table_allocation.csv") == slurp(dir / "r2" / "table_allocation.csv"));
  CHECK(std::filesystem::exists(dir / "r1" / "table_privacy.csv"));
  CHECK(std::filesystem::exists(dir / "r1" / "fronts"));
}

TEST_CASE("split, encode and privacy-eval chain") {
  const auto dir = testing::scratch_dir("cli_chain");
  const auto frag = (dir / "frag").string();
  const auto enc = (dir / "enc").string();
  REQUIRE(dispatch({"split", "--scenario", scenario("normal.json"), "--seed", "4", "--out", frag}).exit_code == 0);
  REQUIRE(dispatch({"encode", "--fragments", frag, "--k", "2", "--noise", "0.05", "--out", enc}).exit_code == 0);
  const auto r = dispatch({"privacy-eval", "--encoded", enc, "--private", frag, "--out", (dir / "p").string()});
  REQUIRE(r.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "p" / "privacy.json"));

  const auto bundle = read_encoded_bundle(enc);
  const auto split = read_split_bundle(frag);
  REQUIRE(bundle.encoded.size() == 1);
  REQUIRE(bundle.encoded[0].size() == split.fragments[0].size());
  for (std::size_t k = 0; k < bundle.encoded[0].size(); ++k) {
    const auto csv = slurp(std::filesystem::path(enc) / "image_0" / (bundle.encoded[0][k].opaque_name + ".csv"));
    CHECK(csv.rfind("opaque_id,e1,e2\n", 0) == 0);
    CHECK(bundle.encoded[0][k].encoded_rows.size() == split.fragments[0][k].patch_count());
  }
}

TEST_CASE("usage errors") {
  CHECK(dispatch({"frobnicate"}).exit_code == 3);
  CHECK(dispatch({}).exit_code == 3);
  CHECK(dispatch({"allocate", "--method", "baseline"}).exit_code == 3);
  const auto dir = testing::scratch_dir("cli_err");
  CHECK(dispatch({"allocate", "--scenario", scenario("normal.json"), "--method", "magic", "--out", dir.string()})
            .exit_code == 3);
  const auto help = dispatch({"--help"});
  CHECK(help.exit_code == 0);
  for (const char* cmd : {"split", "encode", "privacy-eval", "allocate", "compare", "gen-scenario"}) {
    CHECK(help.output.find(cmd) != std::string::npos);
  }
  const auto sub = dispatch({"allocate", "--help"});
  CHECK(sub.exit_code == 0);
  CHECK(sub.output.find("--seed") != std::string::npos);
}
