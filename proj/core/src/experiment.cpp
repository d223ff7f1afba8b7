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

#include "phc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>

#include "phc/encoder.hpp"
#include "phc/errors.hpp"
#include "phc/pareto.hpp"
#include "phc/rng.hpp"

namespace phc {

std::vector<PreferencePreset> standard_presets() {
  return {
      {"Normal", {8, 0.1, 800.0}},
      {"VSN", {5, 0.2, 1200.0}},
      {"VTB", {8, 0.01, 1200.0}},
      {"VST", {8, 0.2, 560.0}},
  };
}

std::optional<PreferencePreset> find_preset(std::string_view name) {
  for (auto& p : standard_presets()) {
    if (p.name.size() != name.size()) continue;
    if (std::equal(name.begin(), name.end(), p.name.begin(),
                   [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) ==
                                               std::tolower(static_cast<unsigned char>(b)); })) {
      return p;
    }
  }
  return std::nullopt;
}

SummaryStat summarize(std::vector<double> values) {
  SummaryStat s;
  s.n = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(values.size()));
  return s;
}

double population_variance(const std::vector<double>& values) {
  const SummaryStat s = summarize(values);
  return s.std * s.std;
}

ImageFragments split_all(const Application& app, SplitMethod method, std::uint64_t seed) {
  ImageFragments out;
  out.reserve(app.images.size());
  for (const auto& img : app.images) out.push_back(split_image(img, method, app.options.rule, seed).fragments);
  return out;
}

double fragment_size_variance(const ImageFragments& fragments) {
  std::vector<double> sizes;
  for (const auto& per_image : fragments) {
    for (const auto& f : per_image) sizes.push_back(static_cast<double>(f.patch_count()));
  }
  return population_variance(sizes);
}

PrivacyReport evaluate_image(const PatchSet& image, SplitMethod method, std::uint64_t seed,
                             const PipelineOptions& options) {
  const SplitOutcome split = split_image(image, method, options.rule, seed);
  const ImageStats stats = image_stats(image);
  const EncodeOptions enc{options.k_dims, options.noise_scale};
  std::vector<EncodedFragment> encoded;
  std::vector<std::vector<KeyEntry>> keys;
  for (const auto& f : split.fragments) {
    encoded.push_back(encode_fragment(f, enc, seed, stats));
    keys.push_back(trusted_key(f, seed));
  }
  return evaluate_privacy(split.fragments, encoded, keys, std::string(to_string(method)),
                          {options.bins, options.label_classes});
}

PrivacySummary summarize_privacy(const std::string& method, const std::vector<PrivacyReport>& reports) {
  PrivacySummary s;
  s.method = method;
  for (std::size_t a = 0; a < 2; ++a) {
    const Axis axis = static_cast<Axis>(a);
    std::vector<double> aig;
    std::vector<double> rho;
    std::vector<double> rho_w;
    std::vector<double> util;
    for (const auto& r : reports) {
      aig.push_back(r.axes[a].aig);
      rho.push_back(r.mean_rho(axis));
      rho_w.push_back(r.patch_weighted_rho(axis));
      util.push_back(r.mean_utility(axis));
    }
    s.aig[a] = summarize(aig);
    s.rho[a] = summarize(rho);
    s.rho_weighted[a] = summarize(rho_w);
    s.utility[a] = summarize(util);
  }
  std::vector<double> frags;
  std::vector<double> var;
  for (const auto& r : reports) {
    frags.push_back(static_cast<double>(r.fragment_count));
    var.push_back(r.fragment_size_variance());
  }
  s.fragments = summarize(frags);
  s.size_variance = summarize(var);
  return s;
}

namespace {

PrivacyExperiment privacy_over(const std::vector<std::uint64_t>& seeds, const PipelineOptions& options,
                               const auto& images_for_seed) {
  PrivacyExperiment out;
  out.seeds = seeds;
  for (std::uint64_t seed : seeds) {
    for (const PatchSet& img : images_for_seed(seed)) {
      out.approach.push_back(evaluate_image(img, SplitMethod::approach, seed, options));
      out.baseline.push_back(evaluate_image(img, SplitMethod::baseline, seed, options));
    }
  }
  out.approach_summary = summarize_privacy("approach", out.approach);
  out.baseline_summary = summarize_privacy("baseline", out.baseline);
  return out;
}

}  // namespace

PrivacyExperiment run_privacy_experiment(std::size_t n_images, const std::vector<std::uint64_t>& seeds,
                                         const SyntheticImageConfig& cfg, const PipelineOptions& options) {
  if (n_images == 0) throw ValidationError("n_images", "n_images must be >= 1");
  return privacy_over(seeds, options, [&](std::uint64_t seed) {
    std::vector<PatchSet> images;
    for (std::size_t i = 0; i < n_images; ++i) {
      const std::string id = "wsi" + std::to_string(i);
      const BinaryMask mask =
          generate_synthetic_mask(cfg.width, cfg.height, cfg.tissue_fraction, derive_seed(seed, "mask/" + id));
      images.push_back(create_patches(mask, PatchSpec{}, id));
    }
    return images;
  });
}

PrivacyExperiment run_privacy_experiment(const Application& app, const std::vector<std::uint64_t>& seeds) {
  return privacy_over(seeds, app.options, [&](std::uint64_t) -> const std::vector<PatchSet>& { return app.images; });
}

std::string_view to_string(Relation r) noexcept {
  switch (r) {
    case Relation::approach_dominates: return "approach_dominates";
    case Relation::baseline_dominates: return "baseline_dominates";
    case Relation::equal: return "equal";
    case Relation::incomparable: return "incomparable";
    case Relation::approach_only: return "approach_only";
    case Relation::baseline_only: return "baseline_only";
    case Relation::neither: return "neither";
  }
  return "neither";
}

Relation compare_representatives(const MethodOutcome& a, const MethodOutcome& b) {
  if (!a.feasible && !b.feasible) return Relation::neither;
  if (!b.feasible) return Relation::approach_only;
  if (!a.feasible) return Relation::baseline_only;
  const auto fa = a.representative.objectives();
  const auto fb = b.representative.objectives();
  if (fa == fb) return Relation::equal;
  if (dominates(fa, fb)) return Relation::approach_dominates;
  if (dominates(fb, fa)) return Relation::baseline_dominates;
  return Relation::incomparable;
}

namespace {

MethodOutcome run_method(const Application& app, const ImageFragments& fragments) {
  MethodOutcome m;
  for (const auto& f : fragments) m.fragments_per_image.push_back(f.size());
  m.fragment_size_variance = fragment_size_variance(fragments);
  AllocationOutcome out = allocate_outcome(app, fragments);
  m.feasible = out.feasible;
  if (m.feasible) {
    m.front = std::move(out.front);
    m.representative = representative(m.front);
  }
  return m;
}

}  // namespace

std::vector<PresetResult> run_allocation_experiment(const Application& app,
                                                    const std::vector<PreferencePreset>& presets,
                                                    const std::vector<std::uint64_t>& seeds) {
  std::vector<PresetResult> results;
  for (const auto& p : presets) results.push_back({p, {}});
  if (presets.empty()) return results;
  for (std::uint64_t seed : seeds) {
    const ImageFragments approach = split_all(app, SplitMethod::approach, seed);
    const ImageFragments baseline = split_all(app, SplitMethod::baseline, seed);
    for (auto& r : results) {
      Application run = app;
      run.constraints = r.preset.constraints;
      PresetRun pr;
      pr.seed = seed;
      pr.approach = run_method(run, approach);
      pr.baseline = run_method(run, baseline);
      pr.relation = compare_representatives(pr.approach, pr.baseline);
      r.runs.push_back(std::move(pr));
    }
  }
  return results;
}

ComparisonReport run_comparison(const Application& app, const std::string& scenario_name,
                                const std::vector<PreferencePreset>& presets,
                                const std::vector<std::uint64_t>& seeds, bool with_privacy) {
  ComparisonReport report;
  report.scenario = scenario_name;
  report.seeds = seeds;
  report.presets = run_allocation_experiment(app, presets, seeds);
  if (with_privacy) report.privacy = run_privacy_experiment(app, seeds);
  return report;
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view field) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || p != end) {
    throw ValidationError(std::string(field), "not an unsigned integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t stop = comma == std::string_view::npos ? text.size() : comma;
    parts.push_back(text.substr(start, stop - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (auto part : split_commas(text)) {
    const std::size_t dots = part.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_u64(part, "seeds"));
      continue;
    }
    const std::uint64_t lo = parse_u64(part.substr(0, dots), "seeds");
    const std::uint64_t hi = parse_u64(part.substr(dots + 2), "seeds");
    if (hi < lo) throw ValidationError("seeds", "descending seed range");
    if (hi - lo >= 100000) throw ValidationError("seeds", "seed range too long");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  return seeds;
}

std::vector<PreferencePreset> parse_preset_list(std::string_view text, const Constraints& scenario_constraints) {
  if (text == "all") return standard_presets();
  std::vector<PreferencePreset> out;
  for (auto part : split_commas(text)) {
    if (part.empty()) continue;
    if (part == "scenario") {
      out.push_back({"scenario", scenario_constraints});
      continue;
    }
    auto p = find_preset(part);
    if (!p) throw ValidationError("presets", "unknown preset '" + std::string(part) + "'");
    out.push_back(*p);
  }
  return out;
}

}  // namespace phc

namespace phc {

Application generate_scenario(const GeneratorOptions& o) {
  if (o.images == 0) throw ValidationError("images", "images must be >= 1");
  if (o.instances == 0) throw ValidationError("instances", "instances must be >= 1");
  if (o.disjoint_pools && o.instances < o.images) {
    throw ValidationError("instances", "disjoint pools need at least one instance per image");
  }
  Rng rng(derive_seed(o.seed, "gen-scenario"));
  Application app;
  app.seed = o.seed;
  app.options.rule = o.rule;
  app.install_time = 120.0;
  app.constraints = standard_presets().front().constraints;

  std::size_t max_chi = 0;
  std::size_t patches = 0;
  std::vector<std::uint32_t> chi;
  for (std::size_t i = 0; i < o.images; ++i) {
    const std::string id = "wsi" + std::to_string(i);
    const BinaryMask mask =
        generate_synthetic_mask(o.width, o.height, o.tissue_fraction, derive_seed(o.seed, "mask/" + id));
    app.images.push_back(create_patches(mask, PatchSpec{}, id));
    chi.push_back(split_image(app.images.back(), SplitMethod::approach, o.rule, o.seed).chi);
    max_chi = std::max<std::size_t>(max_chi, chi.back());
    patches = std::max(patches, app.images.back().size());
  }

  // Link speed sized so an even share of the largest image takes about
  // target_node_seconds on a mid-range node.
  const double share = static_cast<double>(patches) / static_cast<double>(std::max<std::size_t>(1, max_chi));
  const double bpp = static_cast<double>(PatchSpec{}.bytes_per_patch());
  const double budget_time = std::max(1.0, o.target_node_seconds - app.install_time);
  const double ref_bandwidth = share * (bpp + app.output_bytes_per_patch) / (0.7 * budget_time);
  const double ref_perf = share / (0.3 * budget_time * app.base_throughput);

  auto round3 = [](double v) {
    if (!(v > 0.0)) return v;
    const double e = std::pow(10.0, std::floor(std::log10(v)) - 2.0);
    return std::round(v / e) * e;
  };
  const std::size_t free_nodes = std::max<std::size_t>(1, o.instances / 4);
  for (std::size_t j = 0; j < o.instances; ++j) {
    CloudInstance c;
    const bool org = j < free_nodes;
    c.id = (org ? "org" : "vm") + std::to_string(j);
    c.gpu = org ? "T4" : (rng.uniform01() < 0.5 ? "A10G" : "L4");
    c.vcpu = org ? 8 : 16;
    c.ram = org ? 32e9 : 64e9;
    c.sto = 500e9;
    c.loc = org ? "hospital-lan" : "public-cloud";
    const double speed = org ? 0.4 + 0.6 * rng.uniform01() : 0.6 + 2.4 * rng.uniform01();
    c.bandwidth = round3(ref_bandwidth * speed * (0.8 + 0.4 * rng.uniform01()));
    c.perf = round3(ref_perf * speed * (0.8 + 0.4 * rng.uniform01()));
    c.price = org ? 0.0 : round3(2e-5 * speed * (0.5 + rng.uniform01()));
    app.instances.push_back(std::move(c));
  }

  if (o.disjoint_pools) {
    app.pools.resize(o.images);
    const std::size_t per = o.instances / o.images;
    for (std::size_t i = 0; i < o.images; ++i) {
      const std::size_t lo = i * per;
      const std::size_t hi = i + 1 == o.images ? o.instances : lo + per;
      for (std::size_t j = lo; j < hi; ++j) app.pools[i].push_back(app.instances[j].id);
      if (app.pools[i].size() < chi[i]) {
        throw Error(Errc::pool_too_small, "image wsi" + std::to_string(i) + " needs " + std::to_string(chi[i]) +
                                              " instances in its pool, has " + std::to_string(app.pools[i].size()));
      }
    }
  } else if (o.instances < max_chi) {
    throw Error(Errc::pool_too_small, "scenario needs at least " + std::to_string(max_chi) + " instances");
  }
  app.validate();
  return app;
}

}  // namespace phc
