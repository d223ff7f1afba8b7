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

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phc/errors.hpp"
#include "phc/scenario.hpp"

namespace phc {

namespace {

using Json = nlohmann::ordered_json;

template <typename T>
T get_or(const Json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(key, std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

template <typename T>
T require(const Json& obj, const char* key) {
  if (!obj.contains(key)) throw ValidationError(key, std::string("missing required field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(key, std::string("field '") + key + "' has the wrong type: " + e.what());
  }
}

double require_number(const Json& obj, const char* key) {
  if (!obj.contains(key)) throw ValidationError(key, std::string("missing required field '") + key + "'");
  if (!obj.at(key).is_number()) throw ValidationError(key, std::string("field '") + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::size_t require_count(const Json& obj, const char* key) {
  const double v = require_number(obj, key);
  if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
    throw ValidationError(key, std::string("field '") + key + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

BinaryMask mask_from_rows(const Json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError("mask", "mask must be a non-empty array of rows");
  BinaryMask mask;
  mask.height = rows.size();
  mask.width = rows.front().get<std::string>().size();
  mask.cells.reserve(mask.width * mask.height);
  for (const auto& r : rows) {
    const auto row = r.get<std::string>();
    if (row.size() != mask.width) throw ValidationError("mask", "mask rows must have equal length");
    for (char c : row) {
      if (c != '0' && c != '1') throw ValidationError("mask", "mask characters must be 0 or 1");
      mask.cells.push_back(c == '1' ? 1 : 0);
    }
  }
  return mask;
}

Json mask_to_rows(const BinaryMask& mask) {
  Json rows = Json::array();
  for (std::size_t y = 0; y < mask.height; ++y) {
    std::string row(mask.width, '0');
    for (std::size_t x = 0; x < mask.width; ++x) {
      if (mask.at(x, y)) row[x] = '1';
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Application parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario root must be a JSON object");

  Application app;
  const Json sim = doc.contains("simulation") ? doc.at("simulation") : Json::object();
  if (!sim.is_object()) throw ValidationError("simulation", "simulation must be an object");

  PatchSpec spec;
  spec.patch_edge = get_or<std::uint32_t>(sim, "patch_edge", spec.patch_edge);
  spec.channels = get_or<std::uint32_t>(sim, "channels", spec.channels);
  if (sim.contains("compression_factor") && !sim.at("compression_factor").is_null()) {
    spec.compression_factor = sim.at("compression_factor").get<double>();
  }
  spec.validate();

  app.base_throughput = get_or<double>(sim, "base_throughput", app.base_throughput);
  app.install_time = get_or<double>(sim, "install_time", app.install_time);
  app.output_bytes_per_patch = get_or<double>(sim, "output_bytes_per_patch", app.output_bytes_per_patch);
  app.seed = get_or<std::uint64_t>(sim, "seed", app.seed);

  auto& opt = app.options;
  opt.rule = parse_rule(get_or<std::string>(sim, "rule", std::string(to_string(opt.rule))));
  opt.k_dims = get_or<std::size_t>(sim, "k_dims", opt.k_dims);
  opt.noise_scale = get_or<double>(sim, "noise_scale", opt.noise_scale);
  opt.bins = get_or<std::size_t>(sim, "bins", opt.bins);
  opt.label_classes = get_or<std::size_t>(sim, "label_classes", opt.label_classes);
  opt.pool_cap = get_or<std::size_t>(sim, "pool_cap", opt.pool_cap);
  opt.combo_cap = get_or<std::size_t>(sim, "combo_cap", opt.combo_cap);
  opt.mapping_cap = get_or<std::size_t>(sim, "mapping_cap", opt.mapping_cap);
  opt.service_bytes = get_or<double>(sim, "service_bytes", opt.service_bytes);
  opt.billing_granularity = get_or<double>(sim, "billing_granularity", opt.billing_granularity);

  if (!doc.contains("images") || !doc.at("images").is_array()) {
    throw ValidationError("images", "scenario needs an 'images' array");
  }
  bool any_pool = false;
  std::vector<std::vector<std::string>> pools;
  for (const auto& entry : doc.at("images")) {
    const auto id = require<std::string>(entry, "id");
    BinaryMask mask;
    if (entry.contains("mask")) {
      mask = mask_from_rows(entry.at("mask"));
    } else if (entry.contains("mask_file")) {
      mask = load_mask_file(base_dir / entry.at("mask_file").get<std::string>());
    } else if (entry.contains("synthetic")) {
      const auto& s = entry.at("synthetic");
      mask = generate_synthetic_mask(require_count(s, "width"), require_count(s, "height"),
                                     require_number(s, "tissue_fraction"), get_or<std::uint64_t>(s, "seed", 0));
    } else {
      throw ValidationError("mask", "image '" + id + "' needs one of 'mask', 'mask_file' or 'synthetic'");
    }
    if (mask.tissue_count() == 0) throw ValidationError("mask", "image '" + id + "' has no tissue cells");
    app.images.push_back(create_patches(mask, spec, id));
    auto pool = get_or<std::vector<std::string>>(entry, "pool", {});
    any_pool = any_pool || !pool.empty();
    pools.push_back(std::move(pool));
  }
  if (any_pool) app.pools = std::move(pools);

  if (!doc.contains("instances") || !doc.at("instances").is_array()) {
    throw ValidationError("instances", "scenario needs an 'instances' array");
  }
  for (const auto& entry : doc.at("instances")) {
    CloudInstance inst;
    inst.id = require<std::string>(entry, "id");
    inst.gpu = get_or<std::string>(entry, "gpu", "");
    inst.vcpu = get_or<std::uint32_t>(entry, "vcpu", 0);
    inst.ram = get_or<double>(entry, "ram", 0.0);
    inst.sto = get_or<double>(entry, "sto", 0.0);
    inst.bandwidth = require_number(entry, "b");
    inst.loc = get_or<std::string>(entry, "loc", "");
    inst.price = require_number(entry, "p");
    inst.perf = require_number(entry, "perf");
    app.instances.push_back(std::move(inst));
  }

  if (!doc.contains("constraints")) throw ValidationError("constraints", "scenario needs a 'constraints' object");
  const auto& c = doc.at("constraints");
  app.constraints.max_nodes = require_count(c, "max_nodes");
  app.constraints.budget = require_number(c, "budget");
  app.constraints.time_threshold = require_number(c, "time_threshold");

  app.validate();
  return app;
}

Application load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::string serialize_scenario(const Application& app) {
  Json doc;
  Json images = Json::array();
  for (std::size_t i = 0; i < app.images.size(); ++i) {
    const auto& img = app.images[i];
    Json entry;
    entry["id"] = img.image_id;
    entry["mask"] = mask_to_rows(img.to_mask());
    if (!app.pools.empty() && !app.pools[i].empty()) entry["pool"] = app.pools[i];
    images.push_back(std::move(entry));
  }
  doc["images"] = std::move(images);

  Json instances = Json::array();
  for (const auto& inst : app.instances) {
    instances.push_back({{"id", inst.id},
                         {"gpu", inst.gpu},
                         {"vcpu", inst.vcpu},
                         {"ram", inst.ram},
                         {"sto", inst.sto},
                         {"b", inst.bandwidth},
                         {"loc", inst.loc},
                         {"p", inst.price},
                         {"perf", inst.perf}});
  }
  doc["instances"] = std::move(instances);
  doc["constraints"] = {{"max_nodes", app.constraints.max_nodes},
                        {"budget", app.constraints.budget},
                        {"time_threshold", app.constraints.time_threshold}};

  const PatchSpec spec = app.images.empty() ? PatchSpec{} : app.images.front().spec;
  const auto& opt = app.options;
  Json sim;
  sim["base_throughput"] = app.base_throughput;
  sim["install_time"] = app.install_time;
  sim["output_bytes_per_patch"] = app.output_bytes_per_patch;
  sim["seed"] = app.seed;
  sim["patch_edge"] = spec.patch_edge;
  sim["channels"] = spec.channels;
  sim["compression_factor"] = spec.compression_factor ? Json(*spec.compression_factor) : Json(nullptr);
  sim["rule"] = std::string(to_string(opt.rule));
  sim["k_dims"] = opt.k_dims;
  sim["noise_scale"] = opt.noise_scale;
  sim["bins"] = opt.bins;
  sim["label_classes"] = opt.label_classes;
  sim["pool_cap"] = opt.pool_cap;
  sim["combo_cap"] = opt.combo_cap;
  sim["mapping_cap"] = opt.mapping_cap;
  sim["service_bytes"] = opt.service_bytes;
  sim["billing_granularity"] = opt.billing_granularity;
  doc["simulation"] = std::move(sim);
  return doc.dump(2) + "\n";
}

}  // namespace phc
