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

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "phc/allocator.hpp"
#include "phc/costmodel.hpp"
#include "phc/errors.hpp"
#include "phc/experiment.hpp"
#include "phc/pareto.hpp"
#include "support.hpp"

using namespace phc;

namespace {

template <std::size_t M>
std::vector<std::size_t> oracle_front(const std::vector<std::array<double, M>>& pts) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      bool le = true;
      bool lt = false;
      for (std::size_t m = 0; m < M; ++m) {
        le = le && pts[j][m] <= pts[i][m];
        lt = lt || pts[j][m] < pts[i][m];
      }
      dominated = le && lt;
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

CloudInstance inst(std::string id, double b, double perf, double price) {
  CloudInstance c;
  c.id = std::move(id);
  c.bandwidth = b;
  c.perf = perf;
  c.price = price;
  return c;
}

Fragment frag(std::string image, std::size_t index, std::size_t patches) {
  Fragment f;
  f.image_id = std::move(image);
  f.fragment_index = index;
  for (std::size_t i = 0; i < patches; ++i) f.patch_rows.push_back({static_cast<PatchId>(i), static_cast<int>(2 * i), 0});
  f.size_bytes = patches * 150528ull;
  return f;
}

Application base_app(std::vector<CloudInstance> instances, std::size_t images = 1) {
  Application app;
  for (std::size_t i = 0; i < images; ++i) {
    app.images.push_back(testing::full_grid(2, 2, "img" + std::to_string(i)));
  }
  app.instances = std::move(instances);
  app.constraints = {100, 1e9, 1e9};
  return app;
}

// Independent timing formula for the oracle.
double hand_time(std::size_t n, const CloudInstance& c, const Application& app) {
  return (n * 150528.0) / c.bandwidth + app.install_time + n / (200.0 * c.perf) + n * 64.0 / c.bandwidth;
}

}  // namespace

TEST_CASE("pareto filters, small cases") {
  using P2 = std::array<double, 2>;
  using P3 = std::array<double, 3>;
  const std::vector<P2> a{{1, 2}, {2, 1}};
  CHECK(pareto_filter_2d(a).size() == 2);
  const std::vector<P2> b{{1, 1}, {2, 2}};
  CHECK(pareto_filter_2d(b) == std::vector<std::size_t>{0});
  const std::vector<P3> c{{1, 1, 1}, {2, 2, 2}};
  CHECK(pareto_filter_3d(c) == std::vector<std::size_t>{0});
  const std::vector<P3> d{{1, 2, 3}, {3, 2, 1}, {2, 2, 2}};
  CHECK(sorted(pareto_filter_3d(d)) == std::vector<std::size_t>{0, 1, 2});
  const std::vector<P3> dup{{1, 1, 1}, {1, 1, 1}, {0, 2, 2}};
  CHECK(sorted(pareto_filter_3d(dup)) == std::vector<std::size_t>{0, 1, 2});
  CHECK(pareto_filter_3d(std::vector<P3>{}).empty());
}

TEST_CASE("pareto filters match the pairwise oracle") {
  std::mt19937_64 g(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::array<double, 2>> p2(200);
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& p : p2) p = {u(g), u(g)};
    CHECK(sorted(pareto_filter_2d(p2)) == oracle_front(p2));

    std::vector<std::array<double, 3>> p3(500);
    std::uniform_int_distribution<int> d(0, 12);
    for (auto& p : p3) p = {double(d(g)), double(d(g)), double(d(g))};
    CHECK(sorted(pareto_filter_3d(p3)) == oracle_front(p3));
  }
}

TEST_CASE("pf_2d_per_image small cases") {
  SUBCASE("free-slow vs paid-fast trade-off") {
    auto app = base_app({inst("free", 1e6, 0.5, 0.0), inst("paid", 1e7, 2.0, 1e-4)});
    const auto front = pf_2d_per_image(app, 0, {frag("img0", 0, 100)});
    REQUIRE(front.size() == 2);
    CHECK(front[0].instance_of == std::vector<std::size_t>{1});
    CHECK(front[1].instance_of == std::vector<std::size_t>{0});
    CHECK(front[1].cost == 0.0);
    CHECK(front[0].time < front[1].time);
  }
  SUBCASE("paid node dominated by a faster free node") {
    auto app = base_app({inst("free", 1e7, 2.0, 0.0), inst("paid", 1e6, 0.5, 1e-4)});
    const auto front = pf_2d_per_image(app, 0, {frag("img0", 0, 100)});
    REQUIRE(front.size() == 1);
    CHECK(front[0].instance_of == std::vector<std::size_t>{0});
  }
  SUBCASE("one instance") {
    auto app = base_app({inst("only", 1e7, 1.0, 1e-4)});
    CHECK(pf_2d_per_image(app, 0, {frag("img0", 0, 10)}).size() == 1);
  }
  SUBCASE("pool too small") {
    auto app = base_app({inst("only", 1e7, 1.0, 1e-4)});
    try {
      (void)pf_2d_per_image(app, 0, {frag("img0", 0, 10), frag("img0", 1, 3)});
      FAIL("expected PoolTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::pool_too_small);
    }
  }
}

TEST_CASE("pf_2d_per_image equals full enumeration for K=2 over 4 instances") {
  std::mt19937_64 g(44);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CloudInstance> pool;
    for (int j = 0; j < 4; ++j) {
      pool.push_back(inst("n" + std::to_string(j), 1e6 * (1 + 9 * u(g)), 0.2 + 2 * u(g), u(g) < 0.3 ? 0.0 : 1e-4 * u(g)));
    }
    auto app = base_app(pool);
    app.install_time = 10.0;
    const std::vector<Fragment> frags{frag("img0", 0, 40 + trial), frag("img0", 1, 7)};
    const auto got = pf_2d_per_image(app, 0, frags, false);

    std::vector<std::array<double, 2>> pts;
    std::vector<std::vector<std::size_t>> maps;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        if (a == b) continue;
        const double ta = hand_time(frags[0].patch_count(), pool[a], app);
        const double tb = hand_time(frags[1].patch_count(), pool[b], app);
        pts.push_back({std::max(ta, tb), ta * pool[a].price + tb * pool[b].price});
        maps.push_back({a, b});
      }
    }
    std::set<std::pair<double, double>> want;
    for (auto i : oracle_front(pts)) want.emplace(pts[i][0], pts[i][1]);
    std::set<std::pair<double, double>> have;
    for (const auto& a : got) {
      have.emplace(a.time, a.cost);
      CHECK(a.instance_of.size() == 2);
      CHECK(a.instance_of[0] != a.instance_of[1]);
    }
    REQUIRE(have.size() == want.size());
    auto it = want.begin();
    for (const auto& [t, c] : have) {
      CHECK(t == doctest::Approx(it->first).epsilon(1e-12));
      CHECK(c == doctest::Approx(it->second).epsilon(1e-12));
      ++it;
    }
  }
}

TEST_CASE("compose_and_filter") {
  SUBCASE("single free node") {
    auto app = base_app({inst("free", 1e7, 1.0, 0.0)});
    const auto front = pf_2d_per_image(app, 0, {frag("img0", 0, 100)});
    const auto sols = compose_and_filter({front}, app.constraints);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].f1 == 1);
    CHECK(sols[0].f2 == 0.0);
    CHECK(sols[0].f3 == doctest::Approx(hand_time(100, app.instances[0], app)).epsilon(1e-12));
  }
  SUBCASE("budget below every combination") {
    auto app = base_app({inst("a", 1e7, 1.0, 1e-3), inst("b", 1e7, 2.0, 3e-3)});
    const auto front = pf_2d_per_image(app, 0, {frag("img0", 0, 100)}, false);
    CHECK(compose_and_filter({front}, {8, 1e-9, 1e9}).empty());
    app.constraints = {8, 1e-9, 1e9};
    CHECK_FALSE(allocate_outcome(app, {{frag("img0", 0, 100)}}).feasible);
    try {
      (void)allocate(app, {{frag("img0", 0, 100)}});
      FAIL("expected InfeasibleScenario");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::infeasible_scenario);
    }
  }
  SUBCASE("two images with fronts of sizes 2 and 3") {
    const std::vector<ImageAssignment> f0{{"a", {0}, 10.0, 0.5}, {"a", {1}, 5.0, 1.0}};
    const std::vector<ImageAssignment> f1{{"b", {0}, 20.0, 0.1}, {"b", {2}, 8.0, 0.4}, {"b", {3}, 4.0, 2.0}};
    const Constraints c{2, 1.5, 15.0};
    const auto sols = compose_and_filter({f0, f1}, c);
    // Hand evaluation of the six combinations:
    // (0,0): nodes {0} f=(1,0.6,20) t>15 -> out
    // (0,1): {0,2} (2,0.9,10) in      (0,2): {0,3} (2,2.5,10) over budget
    // (1,0): {1,0} (2,1.1,20) t>15    (1,1): {1,2} (2,1.4,8) in
    // (1,2): {1,3} (2,3.0,5) over budget
    REQUIRE(sols.size() == 2);
    CHECK(sols[0].f1 == 2);
    CHECK(sols[0].f2 == doctest::Approx(0.9));
    CHECK(sols[0].f3 == 10.0);
    CHECK(sols[1].f2 == doctest::Approx(1.4));
    CHECK(sols[1].f3 == 8.0);
    for (const auto& s : sols) CHECK(is_feasible(s, c));
  }
  SUBCASE("shared nodes count once") {
    const std::vector<ImageAssignment> f0{{"a", {0, 1}, 10.0, 0.5}};
    const std::vector<ImageAssignment> f1{{"b", {1, 0}, 12.0, 0.5}};
    const auto sols = compose_and_filter({f0, f1}, {2, 10.0, 100.0});
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].f1 == 2);
    CHECK(sols[0].f3 == 12.0);
  }
  SUBCASE("combination cap keeps the extreme points") {
    std::vector<ImageAssignment> f0;
    std::vector<ImageAssignment> f1;
    for (int i = 0; i < 10; ++i) {
      f0.push_back({"a", {0}, 10.0 + i, 10.0 - i});
      f1.push_back({"b", {1}, 10.0 + i, 10.0 - i});
    }
    const auto sols = compose_and_filter({f0, f1}, {8, 1e9, 1e9}, 4);
    CHECK(sols.size() <= 4);
    bool cheapest = false;
    bool fastest = false;
    for (const auto& s : sols) {
      cheapest = cheapest || s.f2 == 2.0;
      fastest = fastest || s.f3 == 10.0;
    }
    CHECK(cheapest);
    CHECK(fastest);
  }
}

TEST_CASE("allocate degenerate case") {
  auto app = base_app({inst("only", 1e7, 1.0, 1e-4)});
  const ImageFragments frags{{frag("img0", 0, 50)}};
  const auto front = allocate(app, frags);
  REQUIRE(front.solutions.size() == 1);
  CHECK(front.solutions[0].f1 == 1);
  const auto brute = brute_force_front(app, frags);
  REQUIRE(brute.solutions.size() == 1);
  CHECK(brute.solutions[0].objectives() == front.solutions[0].objectives());
}

TEST_CASE("allocate equals brute force on disjoint pools") {
  for (const char* name : {"pools_a.json", "pools_b.json", "pools_c.json", "pools_d.json", "pools_e.json",
                           "pools_f.json", "pools_g.json"}) {
    CAPTURE(name);
    const Application app = load_scenario(testing::source_dir() / "scenarios" / "disjoint" / name);
    const ImageFragments frags = split_all(app, SplitMethod::approach, app.seed);
    const auto greedy = allocate_outcome(app, frags);
    const auto brute = brute_force_outcome(app, frags);
    CHECK(greedy.feasible == brute.feasible);
    std::set<std::array<double, 3>> a;
    std::set<std::array<double, 3>> b;
    for (const auto& s : greedy.front.solutions) a.insert(s.objectives());
    for (const auto& s : brute.front.solutions) b.insert(s.objectives());
    CHECK(a == b);
  }
}

TEST_CASE("front is feasible, non-dominated and deduplicated") {
  const Application app = load_scenario(testing::source_dir() / "scenarios" / "normal.json");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (auto method : {SplitMethod::approach, SplitMethod::baseline}) {
      const auto out = allocate_outcome(app, split_all(app, method, seed));
      std::vector<std::array<double, 3>> pts;
      for (const auto& s : out.front.solutions) {
        CHECK(is_feasible(s, app.constraints));
        pts.push_back(s.objectives());
        std::size_t f1 = 0;
        std::set<std::size_t> used;
        for (const auto& a : s.assignments) used.insert(a.instance_of.begin(), a.instance_of.end());
        f1 = used.size();
        CHECK(f1 == s.f1);
      }
      CHECK(oracle_front(pts).size() == pts.size());
      CHECK(std::set<std::array<double, 3>>(pts.begin(), pts.end()).size() == pts.size());
    }
  }
}

TEST_CASE("subset pairing fallback stays feasible and non-dominated") {
  Application app = load_scenario(testing::source_dir() / "scenarios" / "normal.json");
  app.options.mapping_cap = 400;  // below P(11,4), above C(11,4)
  const auto out = allocate_outcome(app, split_all(app, SplitMethod::approach, app.seed));
  REQUIRE(out.stats.exhaustive_per_image.size() == 1);
  CHECK_FALSE(out.stats.exhaustive_per_image[0]);
  std::vector<std::array<double, 3>> pts;
  for (const auto& s : out.front.solutions) {
    CHECK(is_feasible(s, app.constraints));
    pts.push_back(s.objectives());
  }
  CHECK(oracle_front(pts).size() == pts.size());
}

TEST_CASE("pool cap keeps the fastest half") {
  std::vector<CloudInstance> pool;
  for (int j = 0; j < 20; ++j) pool.push_back(inst("n" + std::to_string(j), 1e6 * (j + 1), 1.0 + j, 1e-5 * (20 - j)));
  auto app = base_app(pool);
  app.options.pool_cap = 8;
  const auto chosen = candidate_pool(app, 0);
  CHECK(chosen.size() == 8);
  for (std::size_t j = 16; j < 20; ++j) CHECK(std::find(chosen.begin(), chosen.end(), j) != chosen.end());
}

TEST_CASE("brute force guard") {
  std::vector<CloudInstance> pool;
  for (int j = 0; j < 10; ++j) pool.push_back(inst("n" + std::to_string(j), 1e7, 1.0, 0.0));
  auto app = base_app(pool);
  ImageFragments frags{{}};
  for (std::size_t k = 0; k < 8; ++k) frags[0].push_back(frag("img0", k, 3));
  try {
    (void)brute_force_front(app, frags, 1000);
    FAIL("expected SearchSpaceTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::search_space_too_large);
  }
}

TEST_CASE("representative prefers cost, then time, then nodes") {
  ParetoFront f;
  AllocationSolution a;
  a.f1 = 3;
  a.f2 = 1.0;
  a.f3 = 9.0;
  AllocationSolution b = a;
  b.f1 = 4;
  b.f3 = 8.0;
  AllocationSolution c = a;
  c.f2 = 2.0;
  c.f3 = 1.0;
  f.solutions = {a, b, c};
  CHECK(representative(f).f3 == 8.0);
  CHECK_THROWS_AS(representative(ParetoFront{}), Error);
}
