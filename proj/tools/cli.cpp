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

#include "phc/cli.hpp"

#include <cstdlib>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "phc/allocator.hpp"
#include "phc/csv_io.hpp"
#include "phc/encoder.hpp"
#include "phc/errors.hpp"
#include "phc/experiment.hpp"
#include "phc/privacy_metrics.hpp"
#include "phc/report.hpp"
#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace phc::cli {
namespace {

namespace fs = std::filesystem;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PHC_SEED"); env && *env) {
    const auto seeds = parse_seed_list(env);
    if (seeds.size() != 1) throw ValidationError("PHC_SEED", "PHC_SEED must be a single unsigned integer");
    return seeds.front();
  }
  return fallback;
}

int exit_for(Errc code) {
  switch (code) {
    case Errc::infeasible_scenario: return infeasible;
    case Errc::parse:
    case Errc::validation:
    case Errc::invalid_fraction:
    case Errc::unknown_command: return validation_error;
    default: return runtime_error;
  }
}

struct SplitArgs {
  std::string scenario;
  std::string rule;
  std::string method = "approach";
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct EncodeArgs {
  std::string fragments;
  std::size_t k = 2;
  double noise = 0.05;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct PrivacyArgs {
  std::string encoded;
  std::string priv;
  std::size_t bins = 64;
  std::size_t classes = 2;
  std::string out;
};

struct AllocateArgs {
  std::string scenario;
  std::string method = "approach";
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct CompareArgs {
  std::string scenario;
  std::string presets = "all";
  std::string seeds;
  std::string out;
  bool no_privacy = false;
};

struct GenArgs {
  std::size_t images = 1;
  std::size_t instances = 6;
  std::optional<std::uint64_t> seed;
  std::size_t width = 24;
  std::size_t height = 24;
  double tissue = 0.4;
  std::string rule = "four";
  bool disjoint = false;
  std::string out;
};

void run_split(const SplitArgs& a, CommandResult& r) {
  Application app = load_scenario(a.scenario);
  SplitBundle b;
  b.method = parse_split_method(a.method);
  b.rule = a.rule.empty() ? app.options.rule : parse_rule(a.rule);
  b.seed = resolve_seed(a.seed, app.seed);
  b.images = app.images;
  for (const auto& img : app.images) {
    SplitOutcome s = split_image(img, b.method, b.rule, b.seed);
    r.log.push_back("image=" + img.image_id + " patches=" + std::to_string(img.size()) +
                    " chi=" + std::to_string(s.chi) + " fragments=" + std::to_string(s.fragments.size()));
    b.chi.push_back(s.chi);
    b.fragments.push_back(std::move(s.fragments));
  }
  r.artifacts = write_split_bundle(b, a.out);
}

void run_encode(const EncodeArgs& a, CommandResult& r) {
  const SplitBundle split = read_split_bundle(a.fragments);
  EncodedBundle b;
  b.seed = resolve_seed(a.seed, split.seed);
  b.k_dims = a.k;
  b.noise_scale = a.noise;
  const EncodeOptions opts{a.k, a.noise};
  for (std::size_t i = 0; i < split.images.size(); ++i) {
    const ImageStats stats = image_stats(split.images[i]);
    std::vector<EncodedFragment> enc;
    std::vector<std::vector<KeyEntry>> keys;
    for (const auto& f : split.fragments[i]) {
      enc.push_back(encode_fragment(f, opts, b.seed, stats));
      keys.push_back(trusted_key(f, b.seed));
    }
    r.log.push_back("image=" + split.images[i].image_id + " encoded_fragments=" + std::to_string(enc.size()));
    b.encoded.push_back(std::move(enc));
    b.keys.push_back(std::move(keys));
  }
  r.artifacts = write_encoded_bundle(b, a.out);
}

void run_privacy(const PrivacyArgs& a, CommandResult& r) {
  const SplitBundle split = read_split_bundle(a.priv);
  const EncodedBundle enc = read_encoded_bundle(a.encoded);
  if (split.fragments.size() != enc.encoded.size()) {
    throw ValidationError("encoded", "encoded bundle and private fragments cover different images");
  }
  std::vector<PrivacyReport> reports;
  for (std::size_t i = 0; i < split.fragments.size(); ++i) {
    reports.push_back(evaluate_privacy(split.fragments[i], enc.encoded[i], enc.keys[i],
                                       std::string(to_string(split.method)), {a.bins, a.classes}));
    const auto& rep = reports.back();
    r.log.push_back("image=" + rep.image_id + " aig_x=" + format_double(rep.axes[0].aig) +
                    " aig_y=" + format_double(rep.axes[1].aig) + " rho_x=" + format_double(rep.mean_rho(Axis::x)) +
                    " rho_y=" + format_double(rep.mean_rho(Axis::y)) +
                    " utility=" + format_double(rep.mean_utility(Axis::x)));
  }
  const fs::path out = fs::path(a.out) / "privacy.json";
  write_text_file(out, privacy_json(reports));
  r.artifacts.push_back(out);
}

void run_allocate(const AllocateArgs& a, CommandResult& r) {
  Application app = load_scenario(a.scenario);
  if (!a.preset.empty()) {
    const auto p = find_preset(a.preset);
    if (!p) throw ValidationError("preset", "unknown preset '" + a.preset + "'");
    app.constraints = p->constraints;
  }
  const SplitMethod method = parse_split_method(a.method);
  const std::uint64_t seed = resolve_seed(a.seed, app.seed);
  const ImageFragments frags = split_all(app, method, seed);
  const AllocationOutcome outcome = allocate_outcome(app, frags);
  const fs::path dir(a.out);
  write_text_file(dir / "allocation.json", allocation_json(outcome, app, to_string(method), seed));
  write_text_file(dir / "front.csv", front_to_csv(outcome.front, app));
  write_text_file(dir / "front_points.csv", front_points_csv(outcome.front));
  r.artifacts = {dir / "allocation.json", dir / "front.csv", dir / "front_points.csv"};
  r.log.push_back("method=" + std::string(to_string(method)) + " seed=" + std::to_string(seed) +
                  " fragment_size_variance=" + format_double(fragment_size_variance(frags)));
  if (!outcome.feasible) {
    r.log.push_back("result=infeasible");
    r.exit_code = infeasible;
    return;
  }
  const auto& rep = representative(outcome.front);
  r.log.push_back("result=feasible front_size=" + std::to_string(outcome.front.solutions.size()) +
                  " f1=" + std::to_string(rep.f1) + " f2=" + format_double(rep.f2) + " f3=" + format_double(rep.f3));
}

void run_compare(const CompareArgs& a, CommandResult& r) {
  const Application app = load_scenario(a.scenario);
  std::vector<std::uint64_t> seeds;
  if (!a.seeds.empty()) {
    seeds = parse_seed_list(a.seeds);
  } else {
    seeds = {resolve_seed(std::nullopt, app.seed)};
  }
  const auto presets = parse_preset_list(a.presets, app.constraints);
  const ComparisonReport report =
      run_comparison(app, fs::path(a.scenario).filename().string(), presets, seeds, !a.no_privacy);
  r.artifacts = write_comparison(report, a.out);
  for (const auto& p : report.presets) {
    std::size_t wins = 0;
    for (const auto& run : p.runs) {
      if (run.relation == Relation::approach_dominates || run.relation == Relation::approach_only) ++wins;
    }
    r.log.push_back("preset=" + p.preset.name + " seeds=" + std::to_string(p.runs.size()) +
                    " approach_better=" + std::to_string(wins));
  }
  for (const auto& note : comparison_notes(report)) r.log.push_back("note=" + note);
}

void run_gen(const GenArgs& a, CommandResult& r) {
  GeneratorOptions o;
  o.images = a.images;
  o.instances = a.instances;
  o.seed = resolve_seed(a.seed, 1);
  o.width = a.width;
  o.height = a.height;
  o.tissue_fraction = a.tissue;
  o.rule = parse_rule(a.rule);
  o.disjoint_pools = a.disjoint;
  const Application app = generate_scenario(o);
  write_text_file(a.out, serialize_scenario(app));
  r.artifacts.push_back(a.out);
  r.log.push_back("images=" + std::to_string(app.images.size()) + " instances=" + std::to_string(app.instances.size()) +
                  " seed=" + std::to_string(o.seed));
}

}  // namespace

CommandResult dispatch(const std::vector<std::string>& args) {
  CommandResult result;
  CLI::App app{"Privacy-preserving split, encode and allocation toolkit", "phc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "phc 0.1.0");

  SplitArgs split;
  auto* s = app.add_subcommand("split", "Split scenario images into fragments");
  s->add_option("--scenario", split.scenario, "Scenario JSON file")->required();
  s->add_option("--rule", split.rule, "Neighbourhood rule: four or eight (default: scenario's)");
  s->add_option("--method", split.method, "approach (colouring) or baseline (even split)");
  s->add_option("--seed", split.seed, "Master seed (default: $PHC_SEED, then the scenario seed)");
  s->add_option("--out", split.out, "Output directory")->required();

  EncodeArgs enc;
  auto* e = app.add_subcommand("encode", "Perturb, project and rename split fragments");
  e->add_option("--fragments", enc.fragments, "Directory written by split")->required();
  e->add_option("--k", enc.k, "Kept principal components (1 or 2)");
  e->add_option("--noise", enc.noise, "Noise scale relative to column spread");
  e->add_option("--seed", enc.seed, "Master seed (default: $PHC_SEED, then the split seed)");
  e->add_option("--out", enc.out, "Output directory")->required();

  PrivacyArgs pa;
  auto* p = app.add_subcommand("privacy-eval", "Information gain, utility and privacy lower bounds");
  p->add_option("--encoded", pa.encoded, "Directory written by encode")->required();
  p->add_option("--private", pa.priv, "Directory written by split")->required();
  p->add_option("--bins", pa.bins, "Histogram bins for continuous values");
  p->add_option("--classes", pa.classes, "Classes of the simulated inference labels");
  p->add_option("--out", pa.out, "Output directory")->required();

  AllocateArgs al;
  auto* a = app.add_subcommand("allocate", "Pareto allocation of fragments to instances (exit 2 when infeasible)");
  a->add_option("--scenario", al.scenario, "Scenario JSON file")->required();
  a->add_option("--method", al.method, "approach or baseline");
  a->add_option("--preset", al.preset, "Override constraints with Normal, VSN, VTB or VST");
  a->add_option("--seed", al.seed, "Master seed (default: $PHC_SEED, then the scenario seed)");
  a->add_option("--out", al.out, "Output directory")->required();

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Approach vs baseline over presets and seeds");
  c->add_option("--scenario", cmp.scenario, "Scenario JSON file")->required();
  c->add_option("--presets", cmp.presets, "all, or a comma list of Normal,VSN,VTB,VST,scenario");
  c->add_option("--seeds", cmp.seeds, "Seed list such as 1..20 or 1,5,9 (default: $PHC_SEED, then scenario seed)");
  c->add_flag("--no-privacy", cmp.no_privacy, "Skip the privacy metrics section");
  c->add_option("--out", cmp.out, "Output directory")->required();

  GenArgs gen;
  auto* g = app.add_subcommand("gen-scenario", "Write a random, reproducible scenario file");
  g->add_option("--images", gen.images, "Number of synthetic images");
  g->add_option("--instances", gen.instances, "Number of instances");
  g->add_option("--seed", gen.seed, "Seed (default: $PHC_SEED, then 1)");
  g->add_option("--width", gen.width, "Mask width in patches");
  g->add_option("--height", gen.height, "Mask height in patches");
  g->add_option("--tissue", gen.tissue, "Tissue fraction in (0, 1]");
  g->add_option("--rule", gen.rule, "Neighbourhood rule written into the scenario");
  g->add_flag("--disjoint-pools", gen.disjoint, "Give every image its own instance pool");
  g->add_option("--out", gen.out, "Output scenario file")->required();

  if (!args.empty() && !args.front().empty() && args.front().front() != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args.front();
    if (!known) {
      result.exit_code = validation_error;
      result.log.push_back("error=unknown_command message=unknown command '" + args.front() + "'");
      result.output = app.help();
      return result;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& err) {
    std::ostringstream out;
    std::ostringstream errs;
    const int code = app.exit(err, out, errs);
    result.output = out.str();
    if (code == 0) return result;
    result.exit_code = validation_error;
    result.log.push_back("error=" + std::string(err.get_name()) + " message=" + err.what());
    if (!errs.str().empty()) result.output += errs.str();
    return result;
  }

  try {
    if (s->parsed()) run_split(split, result);
    else if (e->parsed()) run_encode(enc, result);
    else if (p->parsed()) run_privacy(pa, result);
    else if (a->parsed()) run_allocate(al, result);
    else if (c->parsed()) run_compare(cmp, result);
    else if (g->parsed()) run_gen(gen, result);
    else throw Error(Errc::unknown_command, "no subcommand");
  } catch (const ValidationError& err) {
    result.exit_code = validation_error;
    result.log.push_back("error=validation field=" + err.field() + " message=" + err.what());
  } catch (const Error& err) {
    result.exit_code = exit_for(err.code());
    result.log.push_back("error=" + std::string(to_string(err.code())) + " message=" + err.what());
  } catch (const std::exception& err) {
    result.exit_code = runtime_error;
    result.log.push_back("error=runtime message=" + std::string(err.what()));
  }
  return result;
}

}  // namespace phc::cli
