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

#include "phc/allocator.hpp"
#include "phc/experiment.hpp"
#include "phc/privacy_metrics.hpp"

namespace phc {

/// report.json of the privacy-eval command.
std::string privacy_json(const std::vector<PrivacyReport>& reports);

/// allocation.json of the allocate command; `outcome.feasible == false` is written, not thrown.
std::string allocation_json(const AllocationOutcome& outcome, const Application& app, std::string_view method,
                            std::uint64_t seed);

std::string comparison_json(const ComparisonReport& report);

/// One line per preset explaining an approach failure through fragment-size variance; empty when none.
std::vector<std::string> comparison_notes(const ComparisonReport& report);

/// report.json, table_allocation.csv, table_privacy.csv and fronts/<preset>_<method>_seed<n>.csv.
std::vector<std::filesystem::path> write_comparison(const ComparisonReport& report, const std::filesystem::path& dir);

}  // namespace phc
