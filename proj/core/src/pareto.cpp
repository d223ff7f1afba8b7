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

#include "phc/pareto.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>

namespace phc {

std::vector<std::size_t> pareto_filter_3d(std::span<const std::array<double, 3>> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (points[l] != points[r]) return points[l] < points[r];
    return l < r;
  });

  // Lexicographic order guarantees every dominator of a point is visited
  // before it. The staircase holds the minimal (f2, f3) pairs seen so far:
  // keys ascending, values strictly descending.
  std::map<double, double> staircase;
  std::vector<std::size_t> front;
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    while (end < order.size() && points[order[end]] == points[order[g]]) ++end;
    const auto& p = points[order[g]];

    bool dominated = false;
    auto it = staircase.upper_bound(p[1]);
    if (it != staircase.begin() && std::prev(it)->second <= p[2]) dominated = true;

    if (!dominated) {
      for (std::size_t i = g; i < end; ++i) front.push_back(order[i]);
      auto first = staircase.lower_bound(p[1]);
      auto last = first;
      while (last != staircase.end() && last->second >= p[2]) ++last;
      staircase.erase(first, last);
      staircase.emplace(p[1], p[2]);
    }
    g = end;
  }
  return front;
}

std::vector<std::size_t> pareto_filter_2d(std::span<const std::array<double, 2>> points) {
  std::vector<std::array<double, 3>> lifted(points.size());
  std::transform(points.begin(), points.end(), lifted.begin(),
                 [](const std::array<double, 2>& p) { return std::array<double, 3>{0.0, p[0], p[1]}; });
  return pareto_filter_3d(lifted);
}

}  // namespace phc
