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
#include <optional>
#include <string>
#include <vector>

#include "phc/allocator.hpp"
#include "phc/privacy_metrics.hpp"
#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace phc {

struct PreferencePreset {
  std::string name;
  Constraints constraints;
};

/// Normal, VSN, VTB and VST in that order.
std::vector<PreferencePreset> standard_presets();
std::optional<PreferencePreset> find_preset(std::string_view name);

struct SummaryStat {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
};

/// Values are sorted before reduction so the result does not depend on input order.
SummaryStat summarize(std::vector<double> values);

double population_variance(const std::vector<double>& values);

/// Splits every image of `app` with `method`, seeded by `seed`.
ImageFragments split_all(const Application& app, SplitMethod method, std::uint64_t seed);

/// Variance of fragment patch counts pooled over all images.
double fragment_size_variance(const ImageFragments& fragments);

/// Split, encode and evaluate one image with one method.
PrivacyReport evaluate_image(const PatchSet& image, SplitMethod method, std::uint64_t seed,
                             const PipelineOptions& options);

struct PrivacySummary {
  std::string method;
  SummaryStat aig[2];
  SummaryStat rho[2];           // per-image mean over honest-node choices
  SummaryStat rho_weighted[2];  // same, weighted by honest fragment size
  SummaryStat utility[2];
  SummaryStat fragments;
  SummaryStat size_variance;
};

struct PrivacyExperiment {
  std::vector<std::uint64_t> seeds;
  std::vector<PrivacyReport> approach;  // seed-major, then image
  std::vector<PrivacyReport> baseline;
  PrivacySummary approach_summary;
  PrivacySummary baseline_summary;
};

struct SyntheticImageConfig {
  std::size_t width = 100;
  std::size_t height = 100;
  double tissue_fraction = 0.4;
};

/// Synthetic images are regenerated per seed; both methods see the same images.
PrivacyExperiment run_privacy_experiment(std::size_t n_images, const std::vector<std::uint64_t>& seeds,
                                         const SyntheticImageConfig& images = {},
                                         const PipelineOptions& options = {});

/// Same protocol on the images of an existing scenario.
PrivacyExperiment run_privacy_experiment(const Application& app, const std::vector<std::uint64_t>& seeds);

PrivacySummary summarize_privacy(const std::string& method, const std::vector<PrivacyReport>& reports);

struct MethodOutcome {
  bool feasible = false;
  AllocationSolution representative;
  ParetoFront front;
  std::vector<std::size_t> fragments_per_image;
  double fragment_size_variance = 0.0;
};

enum class Relation {
  approach_dominates,
  baseline_dominates,
  equal,
  incomparable,
  approach_only,  // baseline infeasible
  baseline_only,  // approach infeasible
  neither
};
std::string_view to_string(Relation r) noexcept;

struct PresetRun {
  std::uint64_t seed = 0;
  MethodOutcome approach;
  MethodOutcome baseline;
  Relation relation = Relation::neither;
};

struct PresetResult {
  PreferencePreset preset;
  std::vector<PresetRun> runs;  // one per seed, in seed order
};

struct ComparisonReport {
  std::string scenario;
  std::vector<std::uint64_t> seeds;
  std::vector<PresetResult> presets;
  std::optional<PrivacyExperiment> privacy;
};

Relation compare_representatives(const MethodOutcome& approach, const MethodOutcome& baseline);

/// Allocation under each preset for each seed; fragments depend only on the seed.
std::vector<PresetResult> run_allocation_experiment(const Application& app,
                                                    const std::vector<PreferencePreset>& presets,
                                                    const std::vector<std::uint64_t>& seeds);

ComparisonReport run_comparison(const Application& app, const std::string& scenario_name,
                                const std::vector<PreferencePreset>& presets,
                                const std::vector<std::uint64_t>& seeds, bool with_privacy = true);

struct GeneratorOptions {
  std::size_t images = 1;
  std::size_t instances = 6;
  std::uint64_t seed = 1;
  std::size_t width = 24;
  std::size_t height = 24;
  double tissue_fraction = 0.4;
  NeighborhoodRule rule = NeighborhoodRule::four;
  /// Give every image its own instance pool; needs enough instances per colour count.
  bool disjoint_pools = false;
  /// Target per-node busy time used to scale links and accelerators.
  double target_node_seconds = 600.0;
};

/// Random but reproducible scenario: synthetic masks, a mix of free and paid
/// instances, Normal-preset constraints. Throws PoolTooSmall when an image's
/// colour count at `seed` exceeds the instances available to it.
Application generate_scenario(const GeneratorOptions& options);

/// "1..20", "3", "1,4,9" or a mix such as "1..3,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// "all" or a comma list of preset names; "scenario" keeps the file's own constraints.
std::vector<PreferencePreset> parse_preset_list(std::string_view text, const Constraints& scenario_constraints);

}  // namespace phc
