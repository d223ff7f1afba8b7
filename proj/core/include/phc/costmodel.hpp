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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phc/encoder.hpp"
#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace phc {

struct DeploymentRequest {
  double fragment_bytes = 0.0;
  double service_bytes = 0.0;
};

struct NodeTiming {
  double t_deploy = 0.0;
  double t_compute = 0.0;
  double t_comm = 0.0;
  double t_total = 0.0;
};

struct CostLine {
  std::string instance_id;
  double busy_seconds = 0.0;
  double price = 0.0;
  double cost = 0.0;
};

/// Transfer of the request over the node's link plus installation.
double deployment_time(const DeploymentRequest& req, const CloudInstance& node, double install_time);

/// patch_count / (base_throughput * perf).
double compute_time(std::size_t patch_count, const CloudInstance& node, double base_throughput);

/// Full timing of one fragment on one node, using the application's
/// throughput, install time, output size and service size.
NodeTiming node_completion(std::size_t patch_count, std::uint64_t size_bytes, const CloudInstance& node,
                           const Application& app);
NodeTiming node_completion(const Fragment& fragment, const CloudInstance& node, const Application& app);
NodeTiming node_completion(const EncodedFragment& fragment, const CloudInstance& node, const Application& app);

/// Busy time rounded up to `granularity` seconds (0 = continuous).
double billed_seconds(double busy_seconds, double granularity);

CostLine cost_line(const NodeTiming& timing, const CloudInstance& node, double granularity = 0.0);

/// Sum of t_total * price over the given nodes.
double monetary_cost(std::span<const std::pair<NodeTiming, CloudInstance>> timings, double granularity = 0.0);

/// Largest t_total; 0 for an empty set.
double makespan(std::span<const NodeTiming> timings);

}  // namespace phc
