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
#include <vector>

namespace phc::cli {

enum ExitCode : int { ok = 0, infeasible = 2, validation_error = 3, runtime_error = 4 };

struct CommandResult {
  int exit_code = ok;
  std::vector<std::filesystem::path> artifacts;
  /// Structured `key=value` lines describing what happened.
  std::vector<std::string> log;
  /// Help or usage text destined for stdout.
  std::string output;
};

/// Runs one subcommand; `args` excludes the program name. Never throws.
CommandResult dispatch(const std::vector<std::string>& args);

}  // namespace phc::cli
