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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "phc/allocator.hpp"
#include "phc/encoder.hpp"
#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace phc {

/// Shortest round-trip decimal form; identical across runs and platforms.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
/// Creates parent directories; throws Errc::io on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Header `patch_id,x,y`, rows in fragment order.
std::string fragment_to_csv(const Fragment& fragment);
std::vector<Patch> patches_from_csv(const std::string& text);

/// Header `opaque_id,e1` or `opaque_id,e1,e2`.
std::string encoded_to_csv(const EncodedFragment& fragment);
std::vector<EncodedRow> encoded_rows_from_csv(const std::string& text, std::size_t& k_dims);

/// Header `solution_id,f1,f2,f3,assignments_json`; assignments map image id to
/// the instance id serving each fragment in fragment order.
std::string front_to_csv(const ParetoFront& front, const Application& app);
/// Header `f1,f2,f3`, data only for plotting.
std::string front_points_csv(const ParetoFront& front);

/// Output of the split command: one CSV per fragment plus fragments.json.
struct SplitBundle {
  SplitMethod method = SplitMethod::approach;
  NeighborhoodRule rule = NeighborhoodRule::eight;
  std::uint64_t seed = 0;
  std::vector<PatchSet> images;
  std::vector<std::uint32_t> chi;
  ImageFragments fragments;
};

std::vector<std::filesystem::path> write_split_bundle(const SplitBundle& bundle, const std::filesystem::path& dir);
SplitBundle read_split_bundle(const std::filesystem::path& dir);

/// Output of the encode command: CSVs plus encoded.json; the opaque-id key
/// table goes to trusted_key.json and never into the encoded CSVs.
struct EncodedBundle {
  std::uint64_t seed = 0;
  std::size_t k_dims = 2;
  double noise_scale = 0.0;
  std::vector<std::vector<EncodedFragment>> encoded;           // per image
  std::vector<std::vector<std::vector<KeyEntry>>> keys;        // per image, per fragment
};

std::vector<std::filesystem::path> write_encoded_bundle(const EncodedBundle& bundle,
                                                        const std::filesystem::path& dir);
EncodedBundle read_encoded_bundle(const std::filesystem::path& dir);

}  // namespace phc
