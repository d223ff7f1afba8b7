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

#include <stdexcept>
#include <string>
#include <string_view>

namespace phc {

/// Failure categories raised by the library. The CLI maps them onto exit codes.
enum class Errc {
  parse,
  validation,
  invalid_fraction,
  empty_mask,
  empty_input,
  k_too_large,
  incomplete_coloring,
  degenerate_variance,
  too_few_rows,
  convergence_failure,
  length_mismatch,
  index_out_of_range,
  zero_bandwidth,
  invalid_throughput,
  pool_too_small,
  infeasible_scenario,
  search_space_too_large,
  unknown_command,
  io,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(Errc::parse, what) {}
};

/// An invariant of the data model was violated; `field()` names the offender.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(Errc::validation, what), field_(std::move(field)) {}
  [[nodiscard]] const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace phc
