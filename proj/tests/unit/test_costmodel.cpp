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

#include <vector>

#include "doctest.h"
#include "phc/costmodel.hpp"
#include "phc/errors.hpp"

using namespace phc;

namespace {

CloudInstance node(double b, double perf, double price) {
  CloudInstance c;
  c.id = "n";
  c.bandwidth = b;
  c.perf = perf;
  c.price = price;
  return c;
}

Application app_with(double install = 0.0) {
  Application a;
  a.install_time = install;
  return a;
}

}  // namespace

TEST_CASE("deployment time") {
  CHECK(deployment_time({150528000.0, 0.0}, node(1e8, 1, 0), 0.0) == doctest::Approx(1.50528).epsilon(1e-12));
  CHECK(deployment_time({0.0, 0.0}, node(1e8, 1, 0), 42.0) == 42.0);
  const double t1 = deployment_time({3e6, 0.0}, node(1e6, 1, 0), 0.0);
  const double t2 = deployment_time({3e6, 0.0}, node(2e6, 1, 0), 0.0);
  CHECK(t2 == t1 / 2);
  try {
    (void)deployment_time({1.0, 0.0}, node(0.0, 1, 0), 0.0);
    FAIL("expected ZeroBandwidth");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::zero_bandwidth);
  }
}

TEST_CASE("compute time") {
  CHECK(compute_time(1000, node(1e8, 1.0, 0), 200.0) == 5.0);
  CHECK(compute_time(0, node(1e8, 1.0, 0), 200.0) == 0.0);
  CHECK(compute_time(1000, node(1e8, 2.0, 0), 200.0) == 2.5);
  try {
    (void)compute_time(10, node(1e8, 1.0, 0), 0.0);
    FAIL("expected InvalidThroughput");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_throughput);
  }
}

TEST_CASE("node completion, worked example") {
  const auto t = node_completion(1000, 1000ull * 150528, node(1e8, 1.0, 1e-4), app_with());
  CHECK(t.t_deploy == doctest::Approx(1.50528).epsilon(1e-12));
  CHECK(t.t_compute == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(t.t_comm == doctest::Approx(0.00064).epsilon(1e-12));
  CHECK(std::abs(t.t_total - 6.50592) < 1e-9);
  CHECK(t.t_comm / t.t_compute < 1e-3);
  CHECK(std::abs(cost_line(t, node(1e8, 1.0, 1e-4)).cost - 6.50592e-4) < 1e-9);
}

TEST_CASE("empty fragment costs only installation") {
  Fragment f;
  const auto t = node_completion(f, node(1e8, 1.0, 0), app_with(30.0));
  CHECK(t.t_total == 30.0);
}

TEST_CASE("monetary cost") {
  NodeTiming t;
  t.t_total = 6.50592;
  const std::vector<std::pair<NodeTiming, CloudInstance>> one{{t, node(1e8, 1, 1e-4)}};
  CHECK(std::abs(monetary_cost(one) - 0.000650592) < 1e-12);
  const std::vector<std::pair<NodeTiming, CloudInstance>> free{{t, node(1e8, 1, 0)}, {t, node(1e6, 2, 0)}};
  CHECK(monetary_cost(free) == 0.0);
  const std::vector<std::pair<NodeTiming, CloudInstance>> scaled{{t, node(1e8, 1, 3e-4)}};
  CHECK(monetary_cost(scaled) == doctest::Approx(3 * monetary_cost(one)).epsilon(1e-12));
}

TEST_CASE("billing granularity rounds busy time up") {
  CHECK(billed_seconds(61.0, 0.0) == 61.0);
  CHECK(billed_seconds(61.0, 60.0) == 120.0);
  CHECK(billed_seconds(60.0, 60.0) == 60.0);
}

TEST_CASE("makespan") {
  std::vector<NodeTiming> ts(3);
  ts[0].t_total = 3;
  ts[1].t_total = 9;
  ts[2].t_total = 1;
  CHECK(makespan(ts) == 9);
}
