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

#include "phc/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "phc/errors.hpp"

namespace phc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::parse: return "ParseError";
    case Errc::validation: return "ValidationError";
    case Errc::invalid_fraction: return "InvalidFraction";
    case Errc::empty_mask: return "EmptyMask";
    case Errc::empty_input: return "EmptyInput";
    case Errc::k_too_large: return "KTooLarge";
    case Errc::incomplete_coloring: return "IncompleteColoring";
    case Errc::degenerate_variance: return "DegenerateVariance";
    case Errc::too_few_rows: return "TooFewRows";
    case Errc::convergence_failure: return "ConvergenceFailure";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::zero_bandwidth: return "ZeroBandwidth";
    case Errc::invalid_throughput: return "InvalidThroughput";
    case Errc::pool_too_small: return "PoolTooSmall";
    case Errc::infeasible_scenario: return "InfeasibleScenario";
    case Errc::search_space_too_large: return "SearchSpaceTooLarge";
    case Errc::unknown_command: return "UnknownCommand";
    case Errc::io: return "IoError";
  }
  return "Error";
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) noexcept {
  // FNV-1a over the label, then splitmix to decorrelate nearby masters.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(master) ^ h);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  // Rejection sampling keeps the result unbiased and portable.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace phc
