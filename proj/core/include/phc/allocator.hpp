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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace phc {

struct ImageAssignment {
  std::string image_id;
  /// instance_of[k] indexes Application::instances for fragment k.
  std::vector<std::size_t> instance_of;
  double time = 0.0;  // slowest node of this image
  double cost = 0.0;  // summed over the image's nodes
};

struct AllocationSolution {
  std::vector<ImageAssignment> assignments;
  std::size_t f1 = 0;  // distinct instances used across all images
  double f2 = 0.0;     // total monetary cost
  double f3 = 0.0;     // slowest image

  [[nodiscard]] std::array<double, 3> objectives() const { return {static_cast<double>(f1), f2, f3}; }
};

struct ParetoFront {
  /// Mutually non-dominated, one per distinct objective vector, ordered by (f1, f2, f3).
  std::vector<AllocationSolution> solutions;
};

/// Per-image fragment lists, aligned with Application::images.
using ImageFragments = std::vector<std::vector<Fragment>>;

struct AllocationStats {
  std::vector<std::size_t> candidates_per_image;
  std::vector<std::size_t> front_size_per_image;
  std::vector<bool> exhaustive_per_image;  // false when LPT pairing was used
  std::uint64_t combinations_total = 0;     // before combo_cap pruning
  std::uint64_t combinations_evaluated = 0;
  std::uint64_t feasible = 0;
};

struct AllocationOutcome {
  bool feasible = false;
  ParetoFront front;
  AllocationStats stats;
};

/// Instances image `image` may use after the per-image pool restriction and pool_cap.
std::vector<std::size_t> candidate_pool(const Application& app, std::size_t image);

/// The image's 2D (time, cost) front over injective fragment->instance
/// mappings. Enumerates every mapping when that stays under mapping_cap,
/// otherwise one LPT pairing per instance subset. With `prune`, candidates
/// that already break the budget or time threshold are dropped first.
std::vector<ImageAssignment> pf_2d_per_image(const Application& app, std::size_t image,
                                             const std::vector<Fragment>& fragments, bool prune = true);

/// Cartesian composition of the per-image fronts (pruned to combo_cap), keeping
/// the combinations that satisfy the node, budget and time constraints.
std::vector<AllocationSolution> compose_and_filter(const std::vector<std::vector<ImageAssignment>>& per_image_fronts,
                                                   const Constraints& constraints,
                                                   std::size_t combo_cap = 1'000'000);

/// Greedy Pareto-front allocation. Infeasibility is reported, not thrown.
AllocationOutcome allocate_outcome(const Application& app, const ImageFragments& fragments);

/// Same as allocate_outcome() but throws InfeasibleScenario on an empty front.
ParetoFront allocate(const Application& app, const ImageFragments& fragments);

/// Exact front by enumerating every injective mapping of every image.
/// Throws SearchSpaceTooLarge above `max_space` combined mappings.
AllocationOutcome brute_force_outcome(const Application& app, const ImageFragments& fragments,
                                      std::uint64_t max_space = 10'000'000);
ParetoFront brute_force_front(const Application& app, const ImageFragments& fragments,
                              std::uint64_t max_space = 10'000'000);

/// Front member minimising f2, then f3, then f1.
const AllocationSolution& representative(const ParetoFront& front);

bool is_feasible(const AllocationSolution& s, const Constraints& c);

}  // namespace phc
