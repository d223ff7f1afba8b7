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

#include "phc/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "phc/errors.hpp"

namespace phc {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc{} || p != end) throw ParseError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json parse_json_file(const fs::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string image_dir(std::size_t i) { return "image_" + std::to_string(i); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(Errc::io, "cannot format number");
  return {buf, p};
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(Errc::io, "write failed for '" + path.string() + "'");
}

std::string fragment_to_csv(const Fragment& fragment) {
  std::string out = "patch_id,x,y\n";
  for (const auto& p : fragment.patch_rows) {
    out += std::to_string(p.id) + "," + std::to_string(p.x) + "," + std::to_string(p.y) + "\n";
  }
  return out;
}

std::vector<Patch> patches_from_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty() || lines.front() != "patch_id,x,y") throw ParseError("fragment CSV must start with 'patch_id,x,y'");
  std::vector<Patch> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_line(lines[i]);
    if (cells.size() != 3) throw ParseError("fragment CSV row " + std::to_string(i) + " needs 3 fields");
    out.push_back({parse_number<PatchId>(cells[0], "patch_id"), parse_number<std::int32_t>(cells[1], "x"),
                   parse_number<std::int32_t>(cells[2], "y")});
  }
  return out;
}

std::string encoded_to_csv(const EncodedFragment& fragment) {
  std::string out = "opaque_id";
  for (std::size_t c = 0; c < fragment.k_dims; ++c) out += ",e" + std::to_string(c + 1);
  out += "\n";
  for (const auto& row : fragment.encoded_rows) {
    out += row.opaque_id;
    for (double v : row.values) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

std::vector<EncodedRow> encoded_rows_from_csv(const std::string& text, std::size_t& k_dims) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw ParseError("empty encoded CSV");
  const auto header = split_line(lines.front());
  if (header.size() < 2 || header.size() > 3 || header[0] != "opaque_id" || header[1] != "e1" ||
      (header.size() == 3 && header[2] != "e2")) {
    throw ParseError("encoded CSV header must be 'opaque_id,e1[,e2]'");
  }
  k_dims = header.size() - 1;
  std::vector<EncodedRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_line(lines[i]);
    if (cells.size() != header.size()) throw ParseError("encoded CSV row " + std::to_string(i) + " has wrong width");
    EncodedRow row{cells[0], {}};
    for (std::size_t c = 1; c < cells.size(); ++c) row.values.push_back(parse_number<double>(cells[c], "value"));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string front_to_csv(const ParetoFront& front, const Application& app) {
  std::string out = "solution_id,f1,f2,f3,assignments_json\n";
  for (std::size_t s = 0; s < front.solutions.size(); ++s) {
    const auto& sol = front.solutions[s];
    Json a = Json::object();
    for (const auto& img : sol.assignments) {
      Json ids = Json::array();
      for (auto j : img.instance_of) ids.push_back(app.instances.at(j).id);
      a[img.image_id] = ids;
    }
    out += std::to_string(s) + "," + std::to_string(sol.f1) + "," + format_double(sol.f2) + "," +
           format_double(sol.f3) + "," + csv_quote(a.dump()) + "\n";
  }
  return out;
}

std::string front_points_csv(const ParetoFront& front) {
  std::string out = "f1,f2,f3\n";
  for (const auto& s : front.solutions) {
    out += std::to_string(s.f1) + "," + format_double(s.f2) + "," + format_double(s.f3) + "\n";
  }
  return out;
}

std::vector<fs::path> write_split_bundle(const SplitBundle& b, const fs::path& dir) {
  if (b.images.size() != b.fragments.size()) throw Error(Errc::length_mismatch, "images vs fragment lists");
  std::vector<fs::path> written;
  Json manifest;
  manifest["method"] = std::string(to_string(b.method));
  manifest["rule"] = std::string(to_string(b.rule));
  manifest["seed"] = b.seed;
  Json images = Json::array();
  for (std::size_t i = 0; i < b.images.size(); ++i) {
    const PatchSet& img = b.images[i];
    Json ji;
    ji["id"] = img.image_id;
    ji["grid_width"] = img.grid_width;
    ji["grid_height"] = img.grid_height;
    ji["patch_edge"] = img.spec.patch_edge;
    ji["channels"] = img.spec.channels;
    if (img.spec.compression_factor) ji["compression_factor"] = *img.spec.compression_factor;
    ji["patches"] = img.patches.size();
    ji["chi"] = i < b.chi.size() ? b.chi[i] : 0u;
    Json frags = Json::array();
    for (const auto& f : b.fragments[i]) {
      const std::string rel = image_dir(i) + "/fragment_" + std::to_string(f.fragment_index) + ".csv";
      write_text_file(dir / rel, fragment_to_csv(f));
      written.push_back(dir / rel);
      frags.push_back(Json{{"index", f.fragment_index},
                           {"file", rel},
                           {"patch_count", f.patch_count()},
                           {"size_bytes", f.size_bytes}});
    }
    ji["fragments"] = frags;
    images.push_back(ji);
  }
  manifest["images"] = images;
  write_text_file(dir / "fragments.json", manifest.dump(2) + "\n");
  written.push_back(dir / "fragments.json");
  return written;
}

SplitBundle read_split_bundle(const fs::path& dir) {
  const Json m = parse_json_file(dir / "fragments.json");
  SplitBundle b;
  try {
    b.method = parse_split_method(m.at("method").get<std::string>());
    b.rule = parse_rule(m.at("rule").get<std::string>());
    b.seed = m.at("seed").get<std::uint64_t>();
    for (const auto& ji : m.at("images")) {
      PatchSet img;
      img.image_id = ji.at("id").get<std::string>();
      img.grid_width = ji.at("grid_width").get<std::size_t>();
      img.grid_height = ji.at("grid_height").get<std::size_t>();
      img.spec.patch_edge = ji.at("patch_edge").get<std::uint32_t>();
      img.spec.channels = ji.at("channels").get<std::uint32_t>();
      if (ji.contains("compression_factor")) img.spec.compression_factor = ji["compression_factor"].get<double>();
      b.chi.push_back(ji.value("chi", 0u));
      std::vector<Fragment> frags;
      for (const auto& jf : ji.at("fragments")) {
        Fragment f;
        f.image_id = img.image_id;
        f.fragment_index = jf.at("index").get<std::size_t>();
        f.patch_rows = patches_from_csv(read_text_file(dir / jf.at("file").get<std::string>()));
        f.size_bytes = f.patch_rows.size() * img.spec.bytes_per_patch();
        img.patches.insert(img.patches.end(), f.patch_rows.begin(), f.patch_rows.end());
        frags.push_back(std::move(f));
      }
      std::sort(img.patches.begin(), img.patches.end(), [](const Patch& a, const Patch& c) { return a.id < c.id; });
      b.images.push_back(std::move(img));
      b.fragments.push_back(std::move(frags));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("fragments.json: " + std::string(e.what()));
  }
  return b;
}

std::vector<fs::path> write_encoded_bundle(const EncodedBundle& b, const fs::path& dir) {
  if (b.encoded.size() != b.keys.size()) throw Error(Errc::length_mismatch, "encoded vs key lists");
  std::vector<fs::path> written;
  Json manifest;
  manifest["seed"] = b.seed;
  manifest["k_dims"] = b.k_dims;
  manifest["noise_scale"] = b.noise_scale;
  Json images = Json::array();
  Json key_images = Json::array();
  for (std::size_t i = 0; i < b.encoded.size(); ++i) {
    if (b.encoded[i].size() != b.keys[i].size()) throw Error(Errc::length_mismatch, "encoded vs key fragments");
    Json ji;
    Json ki;
    const std::string id = b.encoded[i].empty() ? std::string() : b.encoded[i].front().image_id;
    ji["id"] = id;
    ki["id"] = id;
    Json frags = Json::array();
    Json kfrags = Json::array();
    for (std::size_t k = 0; k < b.encoded[i].size(); ++k) {
      const auto& e = b.encoded[i][k];
      const std::string rel = image_dir(i) + "/" + e.opaque_name + ".csv";
      write_text_file(dir / rel, encoded_to_csv(e));
      written.push_back(dir / rel);
      frags.push_back(Json{{"index", e.fragment_index},
                           {"opaque_name", e.opaque_name},
                           {"file", rel},
                           {"rows", e.encoded_rows.size()},
                           {"size_bytes", e.size_bytes}});
      Json entries = Json::array();
      for (const auto& ke : b.keys[i][k]) entries.push_back(Json::array({ke.opaque_id, ke.patch_id, ke.x, ke.y}));
      kfrags.push_back(Json{{"index", e.fragment_index}, {"opaque_name", e.opaque_name}, {"entries", entries}});
    }
    ji["fragments"] = frags;
    ki["fragments"] = kfrags;
    images.push_back(ji);
    key_images.push_back(ki);
  }
  manifest["images"] = images;
  write_text_file(dir / "encoded.json", manifest.dump(2) + "\n");
  written.push_back(dir / "encoded.json");
  Json keys;
  keys["entry_fields"] = Json::array({"opaque_id", "patch_id", "x", "y"});
  keys["images"] = key_images;
  write_text_file(dir / "trusted_key.json", keys.dump(2) + "\n");
  written.push_back(dir / "trusted_key.json");
  return written;
}

EncodedBundle read_encoded_bundle(const fs::path& dir) {
  const Json m = parse_json_file(dir / "encoded.json");
  const Json kj = parse_json_file(dir / "trusted_key.json");
  EncodedBundle b;
  try {
    b.seed = m.at("seed").get<std::uint64_t>();
    b.k_dims = m.at("k_dims").get<std::size_t>();
    b.noise_scale = m.at("noise_scale").get<double>();
    const auto& key_images = kj.at("images");
    if (key_images.size() != m.at("images").size()) throw ParseError("trusted_key.json does not match encoded.json");
    std::size_t i = 0;
    for (const auto& ji : m.at("images")) {
      const std::string id = ji.at("id").get<std::string>();
      const auto& kfrags = key_images.at(i).at("fragments");
      std::vector<EncodedFragment> enc;
      std::vector<std::vector<KeyEntry>> keys;
      std::size_t k = 0;
      for (const auto& jf : ji.at("fragments")) {
        EncodedFragment e;
        e.image_id = id;
        e.fragment_index = jf.at("index").get<std::size_t>();
        e.opaque_name = jf.at("opaque_name").get<std::string>();
        e.size_bytes = jf.at("size_bytes").get<std::uint64_t>();
        e.encoded_rows = encoded_rows_from_csv(read_text_file(dir / jf.at("file").get<std::string>()), e.k_dims);
        enc.push_back(std::move(e));
        std::vector<KeyEntry> entries;
        for (const auto& row : kfrags.at(k).at("entries")) {
          entries.push_back({row.at(0).get<std::string>(), row.at(1).get<PatchId>(), row.at(2).get<std::int32_t>(),
                             row.at(3).get<std::int32_t>()});
        }
        keys.push_back(std::move(entries));
        ++k;
      }
      b.encoded.push_back(std::move(enc));
      b.keys.push_back(std::move(keys));
      ++i;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("encoded bundle: " + std::string(e.what()));
  }
  return b;
}

}  // namespace phc
