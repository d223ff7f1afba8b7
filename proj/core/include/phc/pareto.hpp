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
#include <span>
#include <vector>

namespace phc {

/// a dominates b when a is no worse in every objective and strictly better in
/// at least one (all objectives minimised).
template <std::size_t M>
constexpr bool dominates(const std::array<double, M>& a, const std::array<double, M>& b) {
  bool strictly = false;
  for (std::size_t i = 0; i < M; ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

/// Indices of the non-dominated points, ordered by (t, c, index). Points with
/// identical objective vectors do not dominate each other and are all kept.
std::vector<std::size_t> pareto_filter_2d(std::span<const std::array<double, 2>> points);

/// Indices of the non-dominated points, ordered by (f1, f2, f3, index).
std::vector<std::size_t> pareto_filter_3d(std::span<const std::array<double, 3>> points);

}  // namespace phc
