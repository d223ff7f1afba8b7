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

#include <set>

#include "doctest.h"
#include "phc/errors.hpp"
#include "phc/rng.hpp"
#include "phc/scenario.hpp"
#include "support.hpp"

using namespace phc;

namespace {

const char* kMinimal = R"({
  "images": [{"id": "a", "mask": ["01", "11"]}],
  "instances": [{"id": "n0", "b": 1e8, "p": 0.0, "perf": 1.0}],
  "constraints": {"max_nodes": 8, "budget": 0.1, "time_threshold": 800}
})";

}  // namespace

TEST_CASE("minimal scenario takes defaults") {
  const Application app = parse_scenario(kMinimal);
  CHECK(app.base_throughput == 200.0);
  CHECK(app.install_time == 0.0);
  CHECK(app.output_bytes_per_patch == 64.0);
  REQUIRE(app.images.size() == 1);
  CHECK(app.images[0].size() == 3);
  CHECK(app.constraints == Constraints{8, 0.1, 800.0});
  CHECK(app.options.rule == NeighborhoodRule::eight);
}

TEST_CASE("zero bandwidth is rejected naming the field") {
  std::string text = kMinimal;
  text.replace(text.find("1e8"), 3, "0");
  try {
    (void)parse_scenario(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "b");
  }
}

TEST_CASE("constraint invariants") {
  CHECK_THROWS_AS((Constraints{0, 0.1, 10.0}.validate()), ValidationError);
  CHECK_THROWS_AS((Constraints{1, -1.0, 10.0}.validate()), ValidationError);
  CHECK_THROWS_AS((Constraints{1, 0.0, 0.0}.validate()), ValidationError);
  CHECK_NOTHROW((Constraints{1, 0.0, 1.0}.validate()));
}

TEST_CASE("malformed scenario text is a parse error") {
  CHECK_THROWS_AS(parse_scenario("{not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"images": []})"), Error);
}

TEST_CASE("serialize then parse is the identity") {
  const Application app = load_scenario(testing::source_dir() / "scenarios" / "normal.json");
  const Application again = parse_scenario(serialize_scenario(app));
  CHECK(again == app);
  CHECK(serialize_scenario(again) == serialize_scenario(app));
}

TEST_CASE("golden Normal scenario carries the Normal constraints") {
  const Application app = load_scenario(testing::source_dir() / "scenarios" / "normal.json");
  CHECK(app.constraints.max_nodes == 8);
  CHECK(app.constraints.budget == 0.1);
  CHECK(app.constraints.time_threshold == 800.0);
}

TEST_CASE("synthetic masks") {
  SUBCASE("full tissue") {
    const BinaryMask m = generate_synthetic_mask(10, 10, 1.0, 99);
    CHECK(m.tissue_count() == 100);
  }
  SUBCASE("deterministic") {
    CHECK(generate_synthetic_mask(50, 50, 0.4, 7) == generate_synthetic_mask(50, 50, 0.4, 7));
  }
  SUBCASE("tissue count near target") {
    const BinaryMask m = generate_synthetic_mask(50, 50, 0.4, 7);
    std::size_t ones = 0;
    for (auto c : m.cells) ones += c != 0;
    CHECK(ones >= 950);
    CHECK(ones <= 1050);
  }
  SUBCASE("bad fractions") {
    for (double f : {0.0, -0.1, 1.5}) {
      try {
        (void)generate_synthetic_mask(5, 5, f, 1);
        FAIL("expected InvalidFraction");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_fraction);
      }
    }
  }
}

TEST_CASE("create_patches") {
  SUBCASE("2x2 full grid") {
    const PatchSet ps = create_patches(BinaryMask(2, 2, 1), PatchSpec{}, "x");
    REQUIRE(ps.size() == 4);
    const std::vector<std::pair<int, int>> want{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(ps.patches[i].x == want[i].first);
      CHECK(ps.patches[i].y == want[i].second);
      CHECK(ps.patches[i].id == i);
    }
  }
  SUBCASE("single cell") {
    BinaryMask m(6, 8, 0);
    m.set(3, 5, true);
    const PatchSet ps = create_patches(m, PatchSpec{}, "x");
    REQUIRE(ps.size() == 1);
    CHECK(ps.patches[0].x == 3);
    CHECK(ps.patches[0].y == 5);
  }
  SUBCASE("empty mask") {
    try {
      (void)create_patches(BinaryMask(3, 3, 0), PatchSpec{}, "x");
      FAIL("expected EmptyMask");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::empty_mask);
    }
  }
  SUBCASE("1000 cells give 1000 unique patches on tissue") {
    BinaryMask m(50, 50, 0);
    Rng rng(5);
    std::size_t placed = 0;
    while (placed < 1000) {
      const auto x = rng.uniform_index(50);
      const auto y = rng.uniform_index(50);
      if (!m.at(x, y)) {
        m.set(x, y, true);
        ++placed;
      }
    }
    const PatchSet ps = create_patches(m, PatchSpec{}, "x");
    CHECK(ps.size() == 1000);
    std::set<std::pair<int, int>> cells;
    std::set<PatchId> ids;
    for (const auto& p : ps.patches) {
      CHECK(m.at(p.x, p.y));
      cells.emplace(p.x, p.y);
      ids.insert(p.id);
    }
    CHECK(cells.size() == 1000);
    CHECK(ids.size() == 1000);
    CHECK(ps.size() * ps.spec.bytes_per_patch() == 1000ull * 150528ull);
  }
}

TEST_CASE("patch byte size") {
  PatchSpec s;
  CHECK(s.bytes_per_patch() == 224ull * 224 * 3);
  s.compression_factor = 0.5;
  CHECK(s.bytes_per_patch() == 75264);
  s.compression_factor = 1.5;
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("mask text round trip") {
  const BinaryMask m = generate_synthetic_mask(13, 7, 0.5, 3);
  CHECK(parse_mask_text(format_mask_text(m)) == m);
  CHECK_THROWS_AS(parse_mask_text("2 2\n01\n1"), ParseError);
}

TEST_CASE("per-image pools resolve to instance indices") {
  const Application app = load_scenario(testing::source_dir() / "scenarios" / "disjoint" / "pools_a.json");
  const auto p0 = app.pool_of(0);
  const auto p1 = app.pool_of(1);
  CHECK(p0.size() == 4);
  CHECK(p1.size() == 4);
  for (auto i : p0) CHECK(std::find(p1.begin(), p1.end(), i) == p1.end());
}
