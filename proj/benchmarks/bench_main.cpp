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

#include <array>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "phc/allocator.hpp"
#include "phc/experiment.hpp"
#include "phc/pareto.hpp"
#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace {

phc::PatchSet synthetic(std::size_t side) {
  const auto mask = phc::generate_synthetic_mask(side, side, 0.4, 11);
  return phc::create_patches(mask, phc::PatchSpec{}, "bench");
}

void BM_BuildAndColor(benchmark::State& state) {
  const auto ps = synthetic(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto g = phc::build_graph(ps, phc::NeighborhoodRule::eight);
    benchmark::DoNotOptimize(phc::greedy_color_rs(g, 5).chi);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ps.size()));
}
BENCHMARK(BM_BuildAndColor)->Arg(50)->Arg(100)->Arg(200);

template <std::size_t M>
std::vector<std::array<double, M>> random_points(std::size_t n) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::array<double, M>> pts(n);
  for (auto& p : pts) {
    for (auto& c : p) c = u(g);
  }
  return pts;
}

void BM_Pareto2D(benchmark::State& state) {
  const auto pts = random_points<2>(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phc::pareto_filter_2d(pts));
}
BENCHMARK(BM_Pareto2D)->Range(1 << 8, 1 << 16);

void BM_Pareto3D(benchmark::State& state) {
  const auto pts = random_points<3>(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phc::pareto_filter_3d(pts));
}
BENCHMARK(BM_Pareto3D)->Range(1 << 8, 1 << 16);

void BM_Allocate(benchmark::State& state) {
  phc::GeneratorOptions o;
  o.images = static_cast<std::size_t>(state.range(0));
  o.instances = 10;
  o.seed = 4;
  const auto app = phc::generate_scenario(o);
  const auto frags = phc::split_all(app, phc::SplitMethod::approach, 4);
  for (auto _ : state) benchmark::DoNotOptimize(phc::allocate_outcome(app, frags).front.solutions.size());
}
BENCHMARK(BM_Allocate)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
