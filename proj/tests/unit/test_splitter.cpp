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
#include <cstdlib>
#include <map>
#include <set>

#include "doctest.h"
#include "phc/errors.hpp"
#include "phc/splitter.hpp"
#include "support.hpp"

using namespace phc;
using phc::testing::full_grid;
using phc::testing::patch_set;

namespace {

bool touching(const Patch& a, const Patch& b, NeighborhoodRule rule) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  if (dx == 0 && dy == 0) return false;
  if (rule == NeighborhoodRule::eight) return dx <= 1 && dy <= 1;
  return dx + dy == 1;
}

// Pairwise edge set, independent of the library's neighbour lookup.
std::set<std::pair<PatchId, PatchId>> brute_edges(const PatchSet& ps, NeighborhoodRule rule) {
  std::set<std::pair<PatchId, PatchId>> e;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = i + 1; j < ps.size(); ++j) {
      if (touching(ps.patches[i], ps.patches[j], rule)) e.emplace(ps.patches[i].id, ps.patches[j].id);
    }
  }
  return e;
}

std::set<std::pair<PatchId, PatchId>> graph_edges(const AdjacencyGraph& g) {
  std::set<std::pair<PatchId, PatchId>> e;
  for (auto [u, v] : g.edges) {
    const PatchId a = g.vertex_ids[u];
    const PatchId b = g.vertex_ids[v];
    e.emplace(std::min(a, b), std::max(a, b));
  }
  return e;
}

}  // namespace

TEST_CASE("build_graph small cases") {
  SUBCASE("single patch") {
    const auto g = build_graph(patch_set({{4, 4}}), NeighborhoodRule::eight);
    CHECK(g.vertex_count() == 1);
    CHECK(g.edges.empty());
  }
  SUBCASE("2x2 four-neighbour square") {
    CHECK(build_graph(full_grid(2, 2), NeighborhoodRule::four).edges.size() == 4);
  }
  SUBCASE("3x3 eight-neighbour") {
    const auto ps = full_grid(3, 3);
    const auto g = build_graph(ps, NeighborhoodRule::eight);
    CHECK(g.edges.size() == 20);
    CHECK(graph_edges(g) == brute_edges(ps, NeighborhoodRule::eight));
    CHECK(g.degree(4) == 8);
    CHECK(g.max_degree() == 8);
  }
  SUBCASE("empty patch set") {
    try {
      (void)build_graph(PatchSet{}, NeighborhoodRule::four);
      FAIL("expected EmptyInput");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::empty_input);
    }
  }
}

TEST_CASE("build_graph matches pairwise oracle on random masks") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ps = create_patches(generate_synthetic_mask(15, 12, 0.45, seed), PatchSpec{}, "m");
    for (auto rule : {NeighborhoodRule::four, NeighborhoodRule::eight}) {
      const auto g = build_graph(ps, rule);
      CHECK(graph_edges(g) == brute_edges(ps, rule));
      for (std::size_t i = 1; i < g.edges.size(); ++i) CHECK(g.edges[i - 1] < g.edges[i]);
      for (auto [u, v] : g.edges) CHECK(u < v);
    }
  }
}

TEST_CASE("greedy colouring") {
  SUBCASE("single vertex") {
    CHECK(greedy_color_rs(build_graph(patch_set({{0, 0}})), 1).chi == 1);
  }
  SUBCASE("path of three under every visiting order") {
    const auto g = build_graph(patch_set({{0, 0}, {1, 0}, {2, 0}}), NeighborhoodRule::four);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto c = greedy_color_rs(g, seed);
      CHECK(c.chi == 2);
      CHECK(is_proper_coloring(g, c));
    }
  }
  SUBCASE("3x3 eight-neighbour grid") {
    const auto g = build_graph(full_grid(3, 3), NeighborhoodRule::eight);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto c = greedy_color_rs(g, seed);
      CHECK(c.chi >= 4);
      CHECK(c.chi <= 9);
      for (auto [u, v] : g.edges) CHECK(c.color_of[u] != c.color_of[v]);
    }
  }
  SUBCASE("same seed, same colouring") {
    const auto g = build_graph(create_patches(generate_synthetic_mask(30, 30, 0.5, 2), PatchSpec{}, "m"));
    const auto a = greedy_color_rs(g, 11);
    const auto b = greedy_color_rs(g, 11);
    CHECK(a.color_of == b.color_of);
    CHECK(a.chi == b.chi);
  }
}

TEST_CASE("split_by_color") {
  SUBCASE("one patch") {
    const auto ps = patch_set({{0, 0}});
    const auto f = split_by_color(ps, greedy_color_rs(build_graph(ps), 1));
    REQUIRE(f.size() == 1);
    CHECK(f[0].patch_count() == 1);
    CHECK(f[0].size_bytes == 150528);
  }
  SUBCASE("path of three gives sizes {2,1}") {
    const auto ps = patch_set({{0, 0}, {1, 0}, {2, 0}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = split_by_color(ps, greedy_color_rs(build_graph(ps, NeighborhoodRule::four), seed));
      REQUIRE(f.size() == 2);
      std::multiset<std::size_t> sizes{f[0].patch_count(), f[1].patch_count()};
      CHECK(sizes == std::multiset<std::size_t>{1, 2});
    }
  }
  SUBCASE("partition and non-adjacency") {
    const auto ps = create_patches(generate_synthetic_mask(40, 40, 0.4, 3), PatchSpec{}, "m");
    for (auto rule : {NeighborhoodRule::four, NeighborhoodRule::eight}) {
      const auto c = greedy_color_rs(build_graph(ps, rule), 8);
      const auto frags = split_by_color(ps, c);
      CHECK(frags.size() == c.chi);
      std::map<PatchId, int> seen;
      for (const auto& f : frags) {
        CHECK(f.size_bytes == f.patch_count() * ps.spec.bytes_per_patch());
        for (const auto& p : f.patch_rows) ++seen[p.id];
        for (std::size_t i = 0; i < f.patch_rows.size(); ++i) {
          for (std::size_t j = i + 1; j < f.patch_rows.size(); ++j) {
            CHECK_FALSE(touching(f.patch_rows[i], f.patch_rows[j], rule));
          }
        }
      }
      CHECK(seen.size() == ps.size());
      for (auto [id, n] : seen) CHECK(n == 1);
      CHECK(fragments_non_adjacent(frags, rule));
    }
  }
  SUBCASE("incomplete colouring is rejected") {
    const auto ps = full_grid(2, 2);
    auto c = greedy_color_rs(build_graph(ps), 1);
    c.color_of.pop_back();
    try {
      (void)split_by_color(ps, c);
      FAIL("expected IncompleteColoring");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::incomplete_coloring);
    }
  }
}

TEST_CASE("baseline even split") {
  const auto ps = full_grid(5, 2);
  SUBCASE("10 into 5") {
    const auto f = baseline_even_split(ps, 5, 3);
    REQUIRE(f.size() == 5);
    for (const auto& x : f) CHECK(x.patch_count() == 2);
  }
  SUBCASE("10 into 3") {
    const auto f = baseline_even_split(ps, 3, 3);
    REQUIRE(f.size() == 3);
    std::multiset<std::size_t> sizes;
    for (const auto& x : f) sizes.insert(x.patch_count());
    CHECK(sizes == std::multiset<std::size_t>{4, 3, 3});
  }
  SUBCASE("deterministic and a partition") {
    const auto a = baseline_even_split(ps, 3, 9);
    const auto b = baseline_even_split(ps, 3, 9);
    std::set<PatchId> ids;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].patch_rows == b[i].patch_rows);
      for (const auto& p : a[i].patch_rows) ids.insert(p.id);
    }
    CHECK(ids.size() == 10);
  }
  SUBCASE("k out of range") {
    for (std::size_t k : {std::size_t{0}, std::size_t{11}}) {
      try {
        (void)baseline_even_split(ps, k, 1);
        FAIL("expected KTooLarge");
      } catch (const Error& e) {
        CHECK(e.code() == Errc::k_too_large);
      }
    }
  }
}

TEST_CASE("split_image uses the colour count for both methods") {
  const auto ps = create_patches(generate_synthetic_mask(30, 30, 0.4, 4), PatchSpec{}, "m");
  const auto a = split_image(ps, SplitMethod::approach, NeighborhoodRule::four, 5);
  const auto b = split_image(ps, SplitMethod::baseline, NeighborhoodRule::four, 5);
  CHECK(a.chi == b.chi);
  CHECK(a.fragments.size() == a.chi);
  CHECK(b.fragments.size() == b.chi);
  CHECK(parse_split_method("baseline") == SplitMethod::baseline);
  CHECK_THROWS_AS(parse_split_method("random"), ValidationError);
}
