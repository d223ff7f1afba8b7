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

#include "phc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "phc/errors.hpp"
#include "phc/rng.hpp"

namespace phc {

std::size_t BinaryMask::tissue_count() const {
  return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

void BinaryMask::validate() const {
  if (cells.size() != width * height) {
    throw ValidationError("cells", "mask has " + std::to_string(cells.size()) +
                                       " cells, expected " + std::to_string(width * height));
  }
  for (auto c : cells) {
    if (c > 1) throw ValidationError("cells", "mask cells must be 0 or 1");
  }
}

std::uint64_t PatchSpec::bytes_per_patch() const {
  const std::uint64_t raw = std::uint64_t{patch_edge} * patch_edge * channels;
  if (!compression_factor) return raw;
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(raw) * *compression_factor));
}

void PatchSpec::validate() const {
  if (patch_edge < 1) throw ValidationError("patch_edge", "patch_edge must be >= 1");
  if (channels < 1) throw ValidationError("channels", "channels must be >= 1");
  if (compression_factor && !(*compression_factor > 0.0 && *compression_factor <= 1.0)) {
    throw ValidationError("compression_factor", "compression_factor must lie in (0, 1]");
  }
}

BinaryMask PatchSet::to_mask() const {
  BinaryMask mask(grid_width, grid_height);
  for (const auto& p : patches) mask.set(static_cast<std::size_t>(p.x), static_cast<std::size_t>(p.y), true);
  return mask;
}

void CloudInstance::validate() const {
  if (id.empty()) throw ValidationError("id", "instance id must not be empty");
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ValidationError("b", "instance '" + id + "': bandwidth b must be > 0");
  }
  if (!(perf > 0.0) || !std::isfinite(perf)) {
    throw ValidationError("perf", "instance '" + id + "': perf must be > 0");
  }
  if (!(price >= 0.0) || !std::isfinite(price)) {
    throw ValidationError("p", "instance '" + id + "': price p must be >= 0");
  }
}

void Constraints::validate() const {
  if (max_nodes < 1) throw ValidationError("max_nodes", "max_nodes must be >= 1");
  if (!(budget >= 0.0)) throw ValidationError("budget", "budget must be >= 0");
  if (!(time_threshold > 0.0)) throw ValidationError("time_threshold", "time_threshold must be > 0");
}

void Application::validate() const {
  if (images.empty()) throw ValidationError("images", "at least one image is required");
  if (instances.empty()) throw ValidationError("instances", "at least one instance is required");
  constraints.validate();
  if (!(base_throughput > 0.0)) throw ValidationError("base_throughput", "base_throughput must be > 0");
  if (!(install_time >= 0.0)) throw ValidationError("install_time", "install_time must be >= 0");
  if (!(output_bytes_per_patch >= 0.0)) {
    throw ValidationError("output_bytes_per_patch", "output_bytes_per_patch must be >= 0");
  }
  if (options.k_dims < 1 || options.k_dims > 2) throw ValidationError("k_dims", "k_dims must be 1 or 2");
  if (!(options.noise_scale >= 0.0)) throw ValidationError("noise_scale", "noise_scale must be >= 0");
  if (options.bins < 1) throw ValidationError("bins", "bins must be >= 1");
  if (options.label_classes < 1) throw ValidationError("label_classes", "label_classes must be >= 1");
  if (options.pool_cap < 1) throw ValidationError("pool_cap", "pool_cap must be >= 1");
  if (options.combo_cap < 1) throw ValidationError("combo_cap", "combo_cap must be >= 1");
  if (!(options.service_bytes >= 0.0)) throw ValidationError("service_bytes", "service_bytes must be >= 0");
  if (!(options.billing_granularity >= 0.0)) {
    throw ValidationError("billing_granularity", "billing_granularity must be >= 0");
  }

  std::set<std::string> instance_ids;
  for (const auto& inst : instances) {
    inst.validate();
    if (!instance_ids.insert(inst.id).second) {
      throw ValidationError("id", "duplicate instance id '" + inst.id + "'");
    }
  }

  std::set<std::string> image_ids;
  for (const auto& img : images) {
    if (img.image_id.empty()) throw ValidationError("image_id", "image id must not be empty");
    if (!image_ids.insert(img.image_id).second) {
      throw ValidationError("image_id", "duplicate image id '" + img.image_id + "'");
    }
    if (img.patches.empty()) throw ValidationError("patches", "image '" + img.image_id + "' has no tissue");
    img.spec.validate();
    std::unordered_set<PatchId> ids;
    std::set<std::pair<std::int32_t, std::int32_t>> coords;
    for (const auto& p : img.patches) {
      if (!ids.insert(p.id).second) throw ValidationError("patch_id", "duplicate patch id");
      if (!coords.insert({p.x, p.y}).second) throw ValidationError("x_coord", "duplicate patch coordinate");
      if (p.x < 0 || p.y < 0 || static_cast<std::size_t>(p.x) >= img.grid_width ||
          static_cast<std::size_t>(p.y) >= img.grid_height) {
        throw ValidationError("x_coord", "patch outside the mask grid");
      }
    }
  }

  if (!pools.empty()) {
    if (pools.size() != images.size()) throw ValidationError("pool", "pools must be given for every image");
    for (const auto& pool : pools) {
      for (const auto& id : pool) {
        if (!instance_ids.count(id)) throw ValidationError("pool", "unknown instance id '" + id + "' in pool");
      }
    }
  }
}

std::vector<std::size_t> Application::pool_of(std::size_t image) const {
  std::vector<std::size_t> out;
  if (pools.empty() || pools[image].empty()) {
    out.resize(instances.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (std::find(pools[image].begin(), pools[image].end(), instances[i].id) != pools[image].end()) {
      out.push_back(i);
    }
  }
  return out;
}

BinaryMask generate_synthetic_mask(std::size_t width, std::size_t height, double tissue_fraction,
                                   std::uint64_t seed) {
  if (!(tissue_fraction > 0.0 && tissue_fraction <= 1.0)) {
    throw Error(Errc::invalid_fraction, "tissue_fraction must lie in (0, 1]");
  }
  if (width == 0 || height == 0) throw ValidationError("width", "mask dimensions must be positive");

  const std::size_t total = width * height;
  const auto target = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(tissue_fraction * static_cast<double>(total))), 1, total);
  if (target == total) return BinaryMask(width, height, 1);

  // 90% of the tissue grows as one 4-connected blob from a cell near the
  // centre; the remaining 10% is scattered uniformly over empty cells.
  constexpr double kNoiseShare = 0.1;
  const std::size_t noise = static_cast<std::size_t>(std::floor(kNoiseShare * static_cast<double>(target)));
  const std::size_t blob_target = target - noise;

  Rng rng(seed);
  BinaryMask mask(width, height);
  std::vector<std::uint8_t> queued(total, 0);
  std::vector<std::size_t> frontier;

  auto push_neighbours = [&](std::size_t cell) {
    const std::size_t x = cell % width;
    const std::size_t y = cell / width;
    auto consider = [&](std::size_t c) {
      if (!queued[c]) {
        queued[c] = 1;
        frontier.push_back(c);
      }
    };
    if (x > 0) consider(cell - 1);
    if (x + 1 < width) consider(cell + 1);
    if (y > 0) consider(cell - width);
    if (y + 1 < height) consider(cell + width);
  };

  const std::size_t cx = width / 4 + rng.uniform_index(std::max<std::size_t>(1, width / 2));
  const std::size_t cy = height / 4 + rng.uniform_index(std::max<std::size_t>(1, height / 2));
  const std::size_t start = cy * width + cx;
  queued[start] = 1;
  mask.cells[start] = 1;
  std::size_t grown = 1;
  push_neighbours(start);

  while (grown < blob_target && !frontier.empty()) {
    const std::size_t pick = rng.uniform_index(frontier.size());
    const std::size_t cell = frontier[pick];
    frontier[pick] = frontier.back();
    frontier.pop_back();
    mask.cells[cell] = 1;
    ++grown;
    push_neighbours(cell);
  }

  std::vector<std::size_t> empty;
  empty.reserve(total - grown);
  for (std::size_t c = 0; c < total; ++c) {
    if (!mask.cells[c]) empty.push_back(c);
  }
  const std::size_t remaining = target - grown;
  for (std::size_t i = 0; i < remaining; ++i) {
    const std::size_t j = i + rng.uniform_index(empty.size() - i);
    std::swap(empty[i], empty[j]);
    mask.cells[empty[i]] = 1;
  }
  return mask;
}

PatchSet create_patches(const BinaryMask& mask, const PatchSpec& spec, std::string image_id) {
  mask.validate();
  spec.validate();
  PatchSet set;
  set.image_id = std::move(image_id);
  set.grid_width = mask.width;
  set.grid_height = mask.height;
  set.spec = spec;
  PatchId next = 0;
  for (std::size_t y = 0; y < mask.height; ++y) {
    for (std::size_t x = 0; x < mask.width; ++x) {
      if (mask.at(x, y)) {
        set.patches.push_back({next++, static_cast<std::int32_t>(x), static_cast<std::int32_t>(y)});
      }
    }
  }
  if (set.patches.empty()) throw Error(Errc::empty_mask, "mask '" + set.image_id + "' has no tissue cells");
  return set;
}

BinaryMask parse_mask_text(const std::string& text) {
  std::istringstream in(text);
  long long w = -1;
  long long h = -1;
  if (!(in >> w >> h) || w <= 0 || h <= 0) throw ParseError("mask header must be 'W H' with positive sizes");
  BinaryMask mask(static_cast<std::size_t>(w), static_cast<std::size_t>(h));
  std::string row;
  for (std::size_t y = 0; y < mask.height; ++y) {
    if (!(in >> row)) throw ParseError("mask has fewer than " + std::to_string(h) + " rows");
    if (row.size() != mask.width) {
      throw ParseError("mask row " + std::to_string(y) + " has " + std::to_string(row.size()) +
                       " characters, expected " + std::to_string(w));
    }
    for (std::size_t x = 0; x < mask.width; ++x) {
      if (row[x] != '0' && row[x] != '1') throw ParseError("mask characters must be 0 or 1");
      mask.set(x, y, row[x] == '1');
    }
  }
  if (in >> row) throw ParseError("mask has trailing content after " + std::to_string(h) + " rows");
  return mask;
}

std::string format_mask_text(const BinaryMask& mask) {
  std::string out = std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n";
  for (std::size_t y = 0; y < mask.height; ++y) {
    for (std::size_t x = 0; x < mask.width; ++x) out.push_back(mask.at(x, y) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

BinaryMask load_mask_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open mask file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_mask_text(buf.str());
}

std::string_view to_string(NeighborhoodRule rule) noexcept {
  return rule == NeighborhoodRule::four ? "four" : "eight";
}

NeighborhoodRule parse_rule(std::string_view text) {
  if (text == "four" || text == "4") return NeighborhoodRule::four;
  if (text == "eight" || text == "8") return NeighborhoodRule::eight;
  throw ValidationError("rule", "neighborhood rule must be 'four' or 'eight'");
}

}  // namespace phc
