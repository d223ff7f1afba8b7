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

#include "phc/report.hpp"

#include <cctype>

#include "json.hpp"
#include "phc/csv_io.hpp"

namespace phc {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* const kAxis[2] = {"x", "y"};

Json stat_json(const SummaryStat& s) { return Json{{"mean", s.mean}, {"std", s.std}, {"n", s.n}}; }

Json summary_json(const PrivacySummary& s) {
  Json j;
  j["method"] = s.method;
  for (std::size_t a = 0; a < 2; ++a) {
    Json axis;
    axis["aig"] = stat_json(s.aig[a]);
    axis["rho_min"] = stat_json(s.rho[a]);
    axis["rho_min_patch_weighted"] = stat_json(s.rho_weighted[a]);
    axis["output_utility"] = stat_json(s.utility[a]);
    j[kAxis[a]] = axis;
  }
  j["fragments"] = stat_json(s.fragments);
  j["fragment_size_variance"] = stat_json(s.size_variance);
  return j;
}

Json report_row(const PrivacyReport& r) {
  Json j;
  j["image"] = r.image_id;
  j["method"] = r.method_label;
  j["fragments"] = r.fragment_count;
  j["fragment_sizes"] = r.fragment_sizes;
  for (std::size_t a = 0; a < 2; ++a) {
    const Axis axis = static_cast<Axis>(a);
    Json ax;
    ax["aig"] = r.axes[a].aig;
    ax["rho_min_mean"] = r.mean_rho(axis);
    ax["rho_min_patch_weighted"] = r.patch_weighted_rho(axis);
    ax["rho_min_per_honest_node"] = r.axes[a].individual_privacy_lb;
    ax["output_utility"] = r.axes[a].output_utility;
    j[kAxis[a]] = ax;
  }
  return j;
}

Json solution_json(const AllocationSolution& s, const std::vector<std::string>* instance_ids) {
  Json j;
  j["f1"] = s.f1;
  j["f2"] = s.f2;
  j["f3"] = s.f3;
  Json a = Json::array();
  for (const auto& img : s.assignments) {
    Json ji;
    ji["image"] = img.image_id;
    if (instance_ids) {
      Json ids = Json::array();
      for (auto k : img.instance_of) ids.push_back(instance_ids->at(k));
      ji["instances"] = ids;
    } else {
      ji["instances"] = img.instance_of;
    }
    ji["time"] = img.time;
    ji["cost"] = img.cost;
    a.push_back(ji);
  }
  j["assignments"] = a;
  return j;
}

Json method_json(const MethodOutcome& m) {
  Json j;
  j["feasible"] = m.feasible;
  j["fragments_per_image"] = m.fragments_per_image;
  j["fragment_size_variance"] = m.fragment_size_variance;
  j["front_size"] = m.front.solutions.size();
  if (m.feasible) {
    j["representative"] = Json{{"f1", m.representative.f1}, {"f2", m.representative.f2}, {"f3", m.representative.f3}};
  } else {
    j["representative"] = nullptr;
  }
  return j;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

std::string privacy_json(const std::vector<PrivacyReport>& reports) {
  Json j;
  std::vector<PrivacyReport> by_method[2];
  for (const auto& r : reports) by_method[r.method_label == "baseline" ? 1 : 0].push_back(r);
  Json summaries = Json::array();
  for (const auto& group : by_method) {
    if (!group.empty()) summaries.push_back(summary_json(summarize_privacy(group.front().method_label, group)));
  }
  j["summary"] = summaries;
  Json rows = Json::array();
  for (const auto& r : reports) rows.push_back(report_row(r));
  j["images"] = rows;
  return j.dump(2) + "\n";
}

std::string allocation_json(const AllocationOutcome& outcome, const Application& app, std::string_view method,
                            std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& inst : app.instances) ids.push_back(inst.id);
  Json j;
  j["method"] = std::string(method);
  j["seed"] = seed;
  j["constraints"] = Json{{"max_nodes", app.constraints.max_nodes},
                          {"budget", app.constraints.budget},
                          {"time_threshold", app.constraints.time_threshold}};
  j["feasible"] = outcome.feasible;
  Json st;
  st["pool_per_image"] = outcome.stats.candidates_per_image;
  st["front_size_per_image"] = outcome.stats.front_size_per_image;
  std::vector<int> exhaustive;
  for (bool b : outcome.stats.exhaustive_per_image) exhaustive.push_back(b ? 1 : 0);
  st["exhaustive_per_image"] = exhaustive;
  st["combinations_total"] = outcome.stats.combinations_total;
  st["combinations_evaluated"] = outcome.stats.combinations_evaluated;
  st["feasible_combinations"] = outcome.stats.feasible;
  j["stats"] = st;
  if (outcome.feasible) {
    j["representative"] = solution_json(representative(outcome.front), &ids);
  } else {
    j["representative"] = nullptr;
  }
  Json front = Json::array();
  for (const auto& s : outcome.front.solutions) front.push_back(solution_json(s, &ids));
  j["front"] = front;
  return j.dump(2) + "\n";
}

std::vector<std::string> comparison_notes(const ComparisonReport& report) {
  std::vector<std::string> notes;
  for (const auto& p : report.presets) {
    std::size_t failures = 0;
    std::vector<double> va;
    std::vector<double> vb;
    for (const auto& r : p.runs) {
      va.push_back(r.approach.fragment_size_variance);
      vb.push_back(r.baseline.fragment_size_variance);
      if (r.relation == Relation::baseline_only || r.relation == Relation::baseline_dominates) ++failures;
    }
    if (failures == 0) continue;
    notes.push_back(p.preset.name + ": approach infeasible or dominated on " + std::to_string(failures) + "/" +
                    std::to_string(p.runs.size()) + " seeds; fragment-size variance approach " +
                    format_double(summarize(va).mean) + " vs baseline " + format_double(summarize(vb).mean) +
                    " (unequal fragments leave the slowest node with the largest share)");
  }
  return notes;
}

std::string comparison_json(const ComparisonReport& report) {
  Json j;
  j["scenario"] = report.scenario;
  j["seeds"] = report.seeds;
  Json presets = Json::array();
  for (const auto& p : report.presets) {
    Json jp;
    jp["name"] = p.preset.name;
    jp["constraints"] = Json{{"max_nodes", p.preset.constraints.max_nodes},
                             {"budget", p.preset.constraints.budget},
                             {"time_threshold", p.preset.constraints.time_threshold}};
    Json runs = Json::array();
    Json counts = Json::object();
    for (Relation r : {Relation::approach_dominates, Relation::baseline_dominates, Relation::equal,
                       Relation::incomparable, Relation::approach_only, Relation::baseline_only, Relation::neither}) {
      counts[std::string(to_string(r))] = 0;
    }
    std::vector<double> obj[2][3];
    std::vector<double> var[2];
    std::size_t feasible[2] = {0, 0};
    for (const auto& r : p.runs) {
      runs.push_back(Json{{"seed", r.seed},
                          {"approach", method_json(r.approach)},
                          {"baseline", method_json(r.baseline)},
                          {"relation", std::string(to_string(r.relation))}});
      counts[std::string(to_string(r.relation))] = counts[std::string(to_string(r.relation))].get<int>() + 1;
      const MethodOutcome* ms[2] = {&r.approach, &r.baseline};
      for (std::size_t m = 0; m < 2; ++m) {
        var[m].push_back(ms[m]->fragment_size_variance);
        if (!ms[m]->feasible) continue;
        ++feasible[m];
        const auto f = ms[m]->representative.objectives();
        for (std::size_t o = 0; o < 3; ++o) obj[m][o].push_back(f[o]);
      }
    }
    Json summary;
    const char* names[2] = {"approach", "baseline"};
    for (std::size_t m = 0; m < 2; ++m) {
      Json s;
      s["feasible_runs"] = feasible[m];
      s["f1"] = stat_json(summarize(obj[m][0]));
      s["f2"] = stat_json(summarize(obj[m][1]));
      s["f3"] = stat_json(summarize(obj[m][2]));
      s["fragment_size_variance"] = stat_json(summarize(var[m]));
      summary[names[m]] = s;
    }
    summary["relations"] = counts;
    jp["summary"] = summary;
    jp["runs"] = runs;
    presets.push_back(jp);
  }
  j["presets"] = presets;
  j["notes"] = comparison_notes(report);
  if (report.privacy) {
    Json pj;
    pj["approach"] = summary_json(report.privacy->approach_summary);
    pj["baseline"] = summary_json(report.privacy->baseline_summary);
    j["privacy"] = pj;
  } else {
    j["privacy"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::vector<fs::path> write_comparison(const ComparisonReport& report, const fs::path& dir) {
  std::vector<fs::path> written;
  write_text_file(dir / "report.json", comparison_json(report));
  written.push_back(dir / "report.json");

  std::string table = "preset,seed,method,feasible,f1,f2,f3,front_size,fragment_size_variance,relation\n";
  for (const auto& p : report.presets) {
    for (const auto& r : p.runs) {
      const MethodOutcome* ms[2] = {&r.approach, &r.baseline};
      const char* names[2] = {"approach", "baseline"};
      for (std::size_t m = 0; m < 2; ++m) {
        const auto& o = *ms[m];
        table += p.preset.name + "," + std::to_string(r.seed) + "," + names[m] + "," + (o.feasible ? "1" : "0") + ",";
        if (o.feasible) {
          table += std::to_string(o.representative.f1) + "," + format_double(o.representative.f2) + "," +
                   format_double(o.representative.f3);
        } else {
          table += "N/A,N/A,N/A";
        }
        table += "," + std::to_string(o.front.solutions.size()) + "," + format_double(o.fragment_size_variance) + "," +
                 std::string(to_string(r.relation)) + "\n";
        if (o.feasible) {
          const fs::path f = dir / "fronts" /
                             (sanitize(p.preset.name) + "_" + names[m] + "_seed" + std::to_string(r.seed) + ".csv");
          write_text_file(f, front_points_csv(o.front));
          written.push_back(f);
        }
      }
    }
  }
  write_text_file(dir / "table_allocation.csv", table);
  written.push_back(dir / "table_allocation.csv");

  if (report.privacy) {
    std::string pt = "method,axis,metric,mean,std,n\n";
    for (const PrivacySummary* s : {&report.privacy->approach_summary, &report.privacy->baseline_summary}) {
      for (std::size_t a = 0; a < 2; ++a) {
        const std::pair<const char*, const SummaryStat*> rows[] = {{"aig", &s->aig[a]},
                                                                   {"rho_min", &s->rho[a]},
                                                                   {"rho_min_patch_weighted", &s->rho_weighted[a]},
                                                                   {"output_utility", &s->utility[a]}};
        for (const auto& [name, st] : rows) {
          pt += s->method + "," + kAxis[a] + "," + name + "," + format_double(st->mean) + "," + format_double(st->std) +
                "," + std::to_string(st->n) + "\n";
        }
      }
      pt += s->method + ",-,fragments," + format_double(s->fragments.mean) + "," + format_double(s->fragments.std) +
            "," + std::to_string(s->fragments.n) + "\n";
    }
    write_text_file(dir / "table_privacy.csv", pt);
    written.push_back(dir / "table_privacy.csv");
  }
  return written;
}

}  // namespace phc
