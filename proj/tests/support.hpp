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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "phc/scenario.hpp"

namespace phc::testing {

inline PatchSet patch_set(const std::vector<std::pair<int, int>>& coords, std::string id = "img") {
  PatchSet ps;
  ps.image_id = std::move(id);
  int w = 0;
  int h = 0;
  for (auto [x, y] : coords) {
    w = std::max(w, x + 1);
    h = std::max(h, y + 1);
  }
  ps.grid_width = static_cast<std::size_t>(w);
  ps.grid_height = static_cast<std::size_t>(h);
  PatchId next = 0;
  for (auto [x, y] : coords) ps.patches.push_back({next++, x, y});
  return ps;
}

inline PatchSet full_grid(int w, int h, std::string id = "img") {
  std::vector<std::pair<int, int>> c;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) c.emplace_back(x, y);
  }
  return patch_set(c, std::move(id));
}

inline std::filesystem::path source_dir() { return PHC_SOURCE_DIR; }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::path(PHC_BINARY_DIR) / "scratch" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace phc::testing
