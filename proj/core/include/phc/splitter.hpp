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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phc/scenario.hpp"

namespace phc {

/// Patch adjacency graph. Vertex i corresponds to patches[i] of the PatchSet it
/// was built from; `vertex_ids[i]` is that patch's id.
struct AdjacencyGraph {
  std::vector<PatchId> vertex_ids;
  /// Undirected edges (u < v) over vertex indices, sorted lexicographically.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  NeighborhoodRule rule = NeighborhoodRule::eight;

  [[nodiscard]] std::size_t vertex_count() const { return vertex_ids.size(); }
  [[nodiscard]] std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  [[nodiscard]] std::size_t max_degree() const;
  /// Neighbours of vertex v as a contiguous range of vertex indices.
  [[nodiscard]] std::pair<const std::uint32_t*, const std::uint32_t*> neighbours(std::size_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  /// Rebuilds the CSR adjacency from `edges`.
  void index();

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
};

struct ColoringResult {
  std::vector<PatchId> vertex_ids;
  /// color_of[i] is the colour of vertex_ids[i], in [0, chi).
  std::vector<std::uint32_t> color_of;
  std::uint32_t chi = 0;
};

struct Fragment {
  std::string image_id;
  std::size_t fragment_index = 0;
  std::vector<Patch> patch_rows;
  std::uint64_t size_bytes = 0;

  [[nodiscard]] std::size_t patch_count() const { return patch_rows.size(); }
};

AdjacencyGraph build_graph(const PatchSet& patches, NeighborhoodRule rule = NeighborhoodRule::eight);

/// Random-sequential greedy colouring: vertices visited in a seeded
/// Fisher-Yates order, each taking the smallest colour unused by coloured
/// neighbours.
ColoringResult greedy_color_rs(const AdjacencyGraph& graph, std::uint64_t seed);

/// Fragment k holds exactly the patches of colour k, in PatchSet order.
std::vector<Fragment> split_by_color(const PatchSet& patches, const ColoringResult& coloring);

/// Seeded shuffle followed by round-robin dealing into k fragments.
std::vector<Fragment> baseline_even_split(const PatchSet& patches, std::size_t k, std::uint64_t seed);

enum class SplitMethod { approach, baseline };

std::string_view to_string(SplitMethod method) noexcept;
SplitMethod parse_split_method(std::string_view text);

struct SplitOutcome {
  std::vector<Fragment> fragments;
  /// Colour count of the image; the baseline reuses it as its fragment count.
  std::uint32_t chi = 0;
};

/// Splits one image with a per-image seed derived from (master_seed, image_id),
/// so results do not depend on the order images are processed in.
SplitOutcome split_image(const PatchSet& patches, SplitMethod method, NeighborhoodRule rule,
                         std::uint64_t master_seed);

/// True when no two patches inside any fragment are adjacent under `rule`.
bool fragments_non_adjacent(const std::vector<Fragment>& fragments, NeighborhoodRule rule);

/// Checks that colours differ across every edge.
bool is_proper_coloring(const AdjacencyGraph& graph, const ColoringResult& coloring);

}  // namespace phc
