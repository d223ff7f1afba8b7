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

#include "phc/keyed_hash.hpp"

#include <sodium.h>

#include <mutex>
#include <stdexcept>

namespace phc {

namespace {

void ensure_sodium() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  });
}

}  // namespace

HashKey HashKey::derive(std::uint64_t seed, std::string_view domain) {
  ensure_sodium();
  std::array<unsigned char, 8> seed_bytes{};
  for (std::size_t i = 0; i < 8; ++i) seed_bytes[i] = static_cast<unsigned char>(seed >> (8 * i));

  crypto_generichash_state state;
  HashKey key;
  crypto_generichash_init(&state, nullptr, 0, key.bytes_.size());
  crypto_generichash_update(&state, reinterpret_cast<const unsigned char*>(domain.data()),
                            domain.size());
  crypto_generichash_update(&state, seed_bytes.data(), seed_bytes.size());
  crypto_generichash_final(&state, key.bytes_.data(), key.bytes_.size());
  return key;
}

std::uint64_t HashKey::digest64(std::string_view message) const {
  std::array<unsigned char, 8> out{};
  crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(message.data()),
                     message.size(), bytes_.data(), bytes_.size());
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(out[i]) << (8 * i);
  return v;
}

std::string HashKey::hex_digest(std::string_view message) const {
  static constexpr char kHex[] = "0123456789abcdef";
  const std::uint64_t v = digest64(message);
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) s[static_cast<std::size_t>(15 - i)] = kHex[(v >> (4 * i)) & 0xF];
  return s;
}

}  // namespace phc
