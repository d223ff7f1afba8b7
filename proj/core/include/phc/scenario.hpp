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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace phc {

using PatchId = std::uint32_t;

/// Tissue mask on the patch grid. Cell (x, y) is stored at y * width + x.
struct BinaryMask {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> cells;

  BinaryMask() = default;
  BinaryMask(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), cells(w * h, fill) {}

  [[nodiscard]] bool at(std::size_t x, std::size_t y) const { return cells[y * width + x] != 0; }
  void set(std::size_t x, std::size_t y, bool v) { cells[y * width + x] = v ? 1 : 0; }
  [[nodiscard]] std::size_t tissue_count() const;

  /// Throws ValidationError when the cell count does not match the shape.
  void validate() const;

  bool operator==(const BinaryMask&) const = default;
};

struct PatchSpec {
  std::uint32_t patch_edge = 224;
  std::uint32_t channels = 3;
  /// When set, scales the raw byte size; must lie in (0, 1].
  std::optional<double> compression_factor;

  [[nodiscard]] std::uint64_t bytes_per_patch() const;
  void validate() const;

  bool operator==(const PatchSpec&) const = default;
};

struct Patch {
  PatchId id = 0;
  std::int32_t x = 0;
  std::int32_t y = 0;

  bool operator==(const Patch&) const = default;
};

struct PatchSet {
  std::string image_id;
  /// Shape of the source mask; kept so a PatchSet can be written back as a mask.
  std::size_t grid_width = 0;
  std::size_t grid_height = 0;
  std::vector<Patch> patches;
  PatchSpec spec;

  [[nodiscard]] std::size_t size() const { return patches.size(); }
  [[nodiscard]] BinaryMask to_mask() const;

  bool operator==(const PatchSet&) const = default;
};

struct CloudInstance {
  std::string id;
  std::string gpu;
  std::uint32_t vcpu = 0;
  double ram = 0.0;        // bytes
  double sto = 0.0;        // bytes
  double bandwidth = 0.0;  // bytes / second
  std::string loc;
  double price = 0.0;      // currency units / second, 0 for free nodes
  double perf = 1.0;       // throughput multiplier, Tesla T4 = 1.0

  void validate() const;
  bool operator==(const CloudInstance&) const = default;
};

struct Constraints {
  std::size_t max_nodes = 1;
  double budget = 0.0;
  double time_threshold = 1.0;

  void validate() const;
  bool operator==(const Constraints&) const = default;
};

enum class NeighborhoodRule { four, eight };

/// Knobs that are not part of the application tuple itself but steer the
/// pipeline stages. All have defaults; scenario files may override them.
struct PipelineOptions {
  NeighborhoodRule rule = NeighborhoodRule::eight;
  std::size_t k_dims = 2;
  double noise_scale = 0.05;
  std::size_t bins = 64;
  std::size_t label_classes = 2;
  std::size_t pool_cap = 12;
  std::size_t combo_cap = 1'000'000;
  std::size_t mapping_cap = 5'000'000;
  double service_bytes = 0.0;
  /// 0 bills continuous seconds; otherwise busy time is rounded up to a multiple.
  double billing_granularity = 0.0;

  bool operator==(const PipelineOptions&) const = default;
};

struct Application {
  std::vector<PatchSet> images;
  std::vector<CloudInstance> instances;
  Constraints constraints;
  double base_throughput = 200.0;
  double install_time = 0.0;
  double output_bytes_per_patch = 64.0;
  std::uint64_t seed = 0;
  /// Optional per-image restriction to a subset of instance ids; empty = all.
  std::vector<std::vector<std::string>> pools;
  PipelineOptions options;

  /// Runs every invariant check; throws ValidationError naming the field.
  void validate() const;
  /// Indices into `instances` usable by image `i`.
  [[nodiscard]] std::vector<std::size_t> pool_of(std::size_t image) const;

  bool operator==(const Application&) const = default;
};

BinaryMask generate_synthetic_mask(std::size_t width, std::size_t height, double tissue_fraction,
                                   std::uint64_t seed);

/// One patch per tissue cell, ids assigned in row-major order.
PatchSet create_patches(const BinaryMask& mask, const PatchSpec& spec, std::string image_id);

/// Mask text format: first line "W H", then H lines of W characters in {0,1}.
BinaryMask parse_mask_text(const std::string& text);
std::string format_mask_text(const BinaryMask& mask);
BinaryMask load_mask_file(const std::filesystem::path& path);

Application load_scenario(const std::filesystem::path& path);
Application parse_scenario(const std::string& json_text,
                           const std::filesystem::path& base_dir = {});
/// Canonical JSON form; images are written as explicit mask rows.
std::string serialize_scenario(const Application& app);

std::string_view to_string(NeighborhoodRule rule) noexcept;
NeighborhoodRule parse_rule(std::string_view text);

}  // namespace phc
