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

#include "phc/splitter.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

#include "phc/errors.hpp"
#include "phc/rng.hpp"

namespace phc {

namespace {

std::uint64_t cell_key(std::int64_t x, std::int64_t y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 32) |
         static_cast<std::uint32_t>(x);
}

bool adjacent(const Patch& a, const Patch& b, NeighborhoodRule rule) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  if (rule == NeighborhoodRule::four) return dx + dy == 1;
  return std::max(dx, dy) == 1;
}

std::vector<Fragment> make_fragments(const PatchSet& patches, std::size_t k) {
  std::vector<Fragment> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i].image_id = patches.image_id;
    out[i].fragment_index = i;
  }
  return out;
}

void finalise_sizes(std::vector<Fragment>& fragments, const PatchSpec& spec) {
  for (auto& f : fragments) f.size_bytes = f.patch_rows.size() * spec.bytes_per_patch();
}

}  // namespace

std::size_t AdjacencyGraph::max_degree() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < vertex_count(); ++v) best = std::max(best, degree(v));
  return best;
}

void AdjacencyGraph::index() {
  const std::size_t n = vertex_ids.size();
  offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.assign(offsets_.back(), 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    adjacency_[cursor[u]++] = v;
    adjacency_[cursor[v]++] = u;
  }
}

AdjacencyGraph build_graph(const PatchSet& patches, NeighborhoodRule rule) {
  if (patches.patches.empty()) throw Error(Errc::empty_input, "cannot build a graph from an empty PatchSet");
  AdjacencyGraph g;
  g.rule = rule;
  const auto& ps = patches.patches;
  g.vertex_ids.reserve(ps.size());
  std::unordered_map<std::uint64_t, std::uint32_t> by_cell;
  by_cell.reserve(ps.size() * 2);
  for (std::uint32_t i = 0; i < ps.size(); ++i) {
    g.vertex_ids.push_back(ps[i].id);
    by_cell.emplace(cell_key(ps[i].x, ps[i].y), i);
  }

  // Forward half-neighbourhood so each undirected edge is seen once.
  static constexpr int kFour[][2] = {{1, 0}, {0, 1}};
  static constexpr int kEight[][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
  for (std::uint32_t i = 0; i < ps.size(); ++i) {
    auto probe = [&](int dx, int dy) {
      auto it = by_cell.find(cell_key(std::int64_t{ps[i].x} + dx, std::int64_t{ps[i].y} + dy));
      if (it != by_cell.end()) g.edges.emplace_back(std::min(i, it->second), std::max(i, it->second));
    };
    if (rule == NeighborhoodRule::four) {
      for (const auto& d : kFour) probe(d[0], d[1]);
    } else {
      for (const auto& d : kEight) probe(d[0], d[1]);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.index();
  return g;
}

ColoringResult greedy_color_rs(const AdjacencyGraph& graph, std::uint64_t seed) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(order));

  constexpr std::uint32_t kUncoloured = ~std::uint32_t{0};
  ColoringResult result;
  result.vertex_ids = graph.vertex_ids;
  result.color_of.assign(n, kUncoloured);
  std::vector<std::uint8_t> used;
  for (std::uint32_t v : order) {
    used.assign(graph.degree(v) + 1, 0);
    auto [first, last] = graph.neighbours(v);
    for (auto it = first; it != last; ++it) {
      const std::uint32_t c = result.color_of[*it];
      if (c != kUncoloured && c < used.size()) used[c] = 1;
    }
    std::uint32_t c = 0;
    while (used[c]) ++c;
    result.color_of[v] = c;
    result.chi = std::max(result.chi, c + 1);
  }
  return result;
}

std::vector<Fragment> split_by_color(const PatchSet& patches, const ColoringResult& coloring) {
  if (coloring.color_of.size() != coloring.vertex_ids.size()) {
    throw Error(Errc::incomplete_coloring, "colouring has mismatched id and colour lists");
  }
  std::unordered_map<PatchId, std::uint32_t> colour;
  colour.reserve(coloring.vertex_ids.size());
  for (std::size_t i = 0; i < coloring.vertex_ids.size(); ++i) {
    colour.emplace(coloring.vertex_ids[i], coloring.color_of[i]);
  }
  auto fragments = make_fragments(patches, coloring.chi);
  for (const auto& p : patches.patches) {
    auto it = colour.find(p.id);
    if (it == colour.end() || it->second >= coloring.chi) {
      throw Error(Errc::incomplete_coloring, "patch " + std::to_string(p.id) + " has no valid colour");
    }
    fragments[it->second].patch_rows.push_back(p);
  }
  finalise_sizes(fragments, patches.spec);
  return fragments;
}

std::vector<Fragment> baseline_even_split(const PatchSet& patches, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > patches.size()) {
    throw Error(Errc::k_too_large, "k=" + std::to_string(k) + " must lie in [1, " +
                                       std::to_string(patches.size()) + "]");
  }
  std::vector<std::uint32_t> order(patches.size());
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<std::uint32_t> owner(patches.size());
  for (std::size_t i = 0; i < order.size(); ++i) owner[order[i]] = static_cast<std::uint32_t>(i % k);

  auto fragments = make_fragments(patches, k);
  // Rows stay in PatchSet order so fragment storage order matches split_by_color.
  for (std::size_t i = 0; i < patches.size(); ++i) fragments[owner[i]].patch_rows.push_back(patches.patches[i]);
  finalise_sizes(fragments, patches.spec);
  return fragments;
}

std::string_view to_string(SplitMethod method) noexcept {
  return method == SplitMethod::approach ? "approach" : "baseline";
}

SplitMethod parse_split_method(std::string_view text) {
  if (text == "approach") return SplitMethod::approach;
  if (text == "baseline") return SplitMethod::baseline;
  throw ValidationError("method", "method must be 'approach' or 'baseline'");
}

SplitOutcome split_image(const PatchSet& patches, SplitMethod method, NeighborhoodRule rule,
                         std::uint64_t master_seed) {
  const auto graph = build_graph(patches, rule);
  const auto coloring = greedy_color_rs(graph, derive_seed(master_seed, "color/" + patches.image_id));
  SplitOutcome out;
  out.chi = coloring.chi;
  if (method == SplitMethod::approach) {
    out.fragments = split_by_color(patches, coloring);
  } else {
    out.fragments =
        baseline_even_split(patches, coloring.chi, derive_seed(master_seed, "even/" + patches.image_id));
  }
  return out;
}

bool fragments_non_adjacent(const std::vector<Fragment>& fragments, NeighborhoodRule rule) {
  for (const auto& f : fragments) {
    std::unordered_map<std::uint64_t, std::size_t> cells;
    for (std::size_t i = 0; i < f.patch_rows.size(); ++i) {
      cells.emplace(cell_key(f.patch_rows[i].x, f.patch_rows[i].y), i);
    }
    for (const auto& p : f.patch_rows) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          auto it = cells.find(cell_key(std::int64_t{p.x} + dx, std::int64_t{p.y} + dy));
          if (it != cells.end() && adjacent(p, f.patch_rows[it->second], rule)) return false;
        }
      }
    }
  }
  return true;
}

bool is_proper_coloring(const AdjacencyGraph& graph, const ColoringResult& coloring) {
  if (coloring.color_of.size() != graph.vertex_count()) return false;
  for (const auto& [u, v] : graph.edges) {
    if (coloring.color_of[u] == coloring.color_of[v]) return false;
  }
  return std::all_of(coloring.color_of.begin(), coloring.color_of.end(),
                     [&](std::uint32_t c) { return c < coloring.chi; });
}

}  // namespace phc
