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
#include <cstdint>
#include <string>
#include <string_view>

namespace phc {

/// 256-bit key for BLAKE2b keyed hashing (libsodium generichash).
class HashKey {
 public:
  /// Derives a key from a seed and a domain label, so that distinct uses of
  /// the same seed produce unrelated keys.
  static HashKey derive(std::uint64_t seed, std::string_view domain);

  /// 64-bit keyed digest of `message`, rendered as 16 lowercase hex chars.
  [[nodiscard]] std::string hex_digest(std::string_view message) const;
  [[nodiscard]] std::uint64_t digest64(std::string_view message) const;

 private:
  std::array<unsigned char, 32> bytes_{};
};

}  // namespace phc
