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

#include "phc/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include "phc/errors.hpp"

namespace phc {

double deployment_time(const DeploymentRequest& req, const CloudInstance& node, double install_time) {
  if (!(node.bandwidth > 0.0)) throw Error(Errc::zero_bandwidth, "instance '" + node.id + "' has no bandwidth");
  return (req.fragment_bytes + req.service_bytes) / node.bandwidth + install_time;
}

double compute_time(std::size_t patch_count, const CloudInstance& node, double base_throughput) {
  if (!(base_throughput > 0.0) || !(node.perf > 0.0)) {
    throw Error(Errc::invalid_throughput, "throughput and perf must be positive");
  }
  return static_cast<double>(patch_count) / (base_throughput * node.perf);
}

NodeTiming node_completion(std::size_t patch_count, std::uint64_t size_bytes, const CloudInstance& node,
                           const Application& app) {
  NodeTiming t;
  t.t_deploy = deployment_time({static_cast<double>(size_bytes), app.options.service_bytes}, node, app.install_time);
  t.t_compute = compute_time(patch_count, node, app.base_throughput);
  t.t_comm = static_cast<double>(patch_count) * app.output_bytes_per_patch / node.bandwidth;
  t.t_total = t.t_deploy + t.t_compute + t.t_comm;
  return t;
}

NodeTiming node_completion(const Fragment& fragment, const CloudInstance& node, const Application& app) {
  return node_completion(fragment.patch_count(), fragment.size_bytes, node, app);
}

NodeTiming node_completion(const EncodedFragment& fragment, const CloudInstance& node, const Application& app) {
  return node_completion(fragment.encoded_rows.size(), fragment.size_bytes, node, app);
}

double billed_seconds(double busy_seconds, double granularity) {
  if (!(granularity > 0.0)) return busy_seconds;
  return std::ceil(busy_seconds / granularity) * granularity;
}

CostLine cost_line(const NodeTiming& timing, const CloudInstance& node, double granularity) {
  CostLine line;
  line.instance_id = node.id;
  line.busy_seconds = billed_seconds(timing.t_total, granularity);
  line.price = node.price;
  line.cost = line.busy_seconds * node.price;
  return line;
}

double monetary_cost(std::span<const std::pair<NodeTiming, CloudInstance>> timings, double granularity) {
  double total = 0.0;
  for (const auto& [timing, node] : timings) total += cost_line(timing, node, granularity).cost;
  return total;
}

double makespan(std::span<const NodeTiming> timings) {
  double best = 0.0;
  for (const auto& t : timings) best = std::max(best, t.t_total);
  return best;
}

}  // namespace phc
