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

#include "phc/privacy_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "phc/errors.hpp"
#include "phc/keyed_hash.hpp"

namespace phc {

namespace {

// Entropy from a multiset of counts. Counts are summed in ascending order so
// that any two symbol streams with the same count profile give bit-identical
// results (this makes NMI exactly symmetric).
double entropy_from_counts(std::vector<std::size_t> counts, std::size_t n) {
  std::sort(counts.begin(), counts.end());
  double h = 0.0;
  const double total = static_cast<double>(n);
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h + 0.0;
}

std::vector<std::size_t> run_counts(std::vector<Symbol> sorted) {
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return counts;
}

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(Errc::length_mismatch, std::string(what) + ": lengths " + std::to_string(a) + " and " +
                                           std::to_string(b) + " differ");
  }
}

}  // namespace

double shannon_entropy(std::span<const Symbol> values) {
  if (values.empty()) throw Error(Errc::empty_input, "entropy of an empty symbol list");
  return entropy_from_counts(run_counts({values.begin(), values.end()}), values.size());
}

SymbolList quantize_range(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins < 1) throw ValidationError("bins", "bins must be >= 1");
  SymbolList out(values.size(), 0);
  if (!(hi > lo)) return out;
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double pos = std::ceil((values[i] - lo) / width) - 1.0;
    out[i] = static_cast<Symbol>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
  }
  return out;
}

SymbolList quantize(std::span<const double> values, std::size_t bins) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return quantize_range(values, bins, *lo, *hi);
}

SymbolList pair_symbols(std::span<const Symbol> x, std::span<const Symbol> y) {
  require_same_length(x.size(), y.size(), "pair_symbols");
  std::vector<std::pair<Symbol, Symbol>> pairs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) pairs[i] = {x[i], y[i]};
  auto sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  SymbolList out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::lower_bound(sorted.begin(), sorted.end(), pairs[i]) - sorted.begin();
  }
  return out;
}

double normalized_mutual_information(std::span<const Symbol> x, std::span<const Symbol> y) {
  require_same_length(x.size(), y.size(), "normalized_mutual_information");
  if (x.empty()) throw Error(Errc::empty_input, "NMI of empty symbol lists");
  const double hx = shannon_entropy(x);
  const double hy = shannon_entropy(y);
  if (hx == 0.0 && hy == 0.0) return 1.0;
  const auto joint = pair_symbols(x, y);
  const double hxy = shannon_entropy(joint);
  const double mi = hx + hy - hxy;
  const double denom = 0.5 * (hx + hy);
  return std::clamp(mi / denom, 0.0, 1.0);
}

double average_information_gain(std::span<const SymbolList> private_frags,
                                std::span<const SymbolList> encoded_frags) {
  require_same_length(private_frags.size(), encoded_frags.size(), "average_information_gain");
  if (private_frags.empty()) throw Error(Errc::empty_input, "AIG needs at least one fragment");
  double acc = 0.0;
  for (std::size_t i = 0; i < private_frags.size(); ++i) {
    acc += shannon_entropy(encoded_frags[i]) - shannon_entropy(private_frags[i]);
  }
  return acc / static_cast<double>(private_frags.size());
}

double output_utility(std::span<const Symbol> desired, std::span<const Symbol> estimated) {
  require_same_length(desired.size(), estimated.size(), "output_utility");
  return normalized_mutual_information(desired, estimated);
}

double individual_privacy_lower_bound(std::span<const SymbolList> fragments_private,
                                      std::span<const SymbolList> fragments_outputs, std::size_t honest_index,
                                      std::size_t bins) {
  require_same_length(fragments_private.size(), fragments_outputs.size(), "individual_privacy_lower_bound");
  const std::size_t k = fragments_private.size();
  if (honest_index >= k) {
    throw Error(Errc::index_out_of_range,
                "honest index " + std::to_string(honest_index) + " out of range for " + std::to_string(k) + " fragments");
  }
  if (k < 2) throw Error(Errc::index_out_of_range, "the adversary view needs at least one corrupted fragment");
  for (std::size_t j = 0; j < k; ++j) {
    require_same_length(fragments_private[j].size(), fragments_outputs[j].size(), "fragment rows vs outputs");
  }

  // Shared binning over the union of all private values.
  bool any = false;
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& frag : fragments_private) {
    for (Symbol s : frag) {
      const auto v = static_cast<double>(s);
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
  }
  auto binned = [&](const SymbolList& frag) {
    std::vector<double> v(frag.begin(), frag.end());
    return quantize_range(v, bins, lo, hi);
  };

  const SymbolList honest = binned(fragments_private[honest_index]);
  SymbolList adv_private;
  SymbolList adv_output;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == honest_index) continue;
    const auto b = binned(fragments_private[j]);
    adv_private.insert(adv_private.end(), b.begin(), b.end());
    adv_output.insert(adv_output.end(), fragments_outputs[j].begin(), fragments_outputs[j].end());
  }
  const SymbolList adversary = pair_symbols(adv_private, adv_output);

  const std::size_t nh = honest.size();
  const std::size_t na = adversary.size();
  const std::size_t len = std::min(nh, na);
  if (len == 0) return 0.0;
  SymbolList h(len);
  SymbolList a(len);
  for (std::size_t t = 0; t < len; ++t) {
    h[t] = honest[t * nh / len];
    a[t] = adversary[t * na / len];
  }
  return normalized_mutual_information(h, a);
}

Symbol simulated_inference_label(const std::string& image_id, PatchId patch_id, std::size_t classes) {
  static const HashKey key = HashKey::derive(0, "phc/inference");
  if (classes < 1) throw ValidationError("label_classes", "label_classes must be >= 1");
  return static_cast<Symbol>(key.digest64(image_id + '\x1f' + std::to_string(patch_id)) % classes);
}

double PrivacyReport::mean_rho(Axis axis) const {
  const auto& v = axes[static_cast<std::size_t>(axis)].individual_privacy_lb;
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double PrivacyReport::patch_weighted_rho(Axis axis) const {
  const auto& v = axes[static_cast<std::size_t>(axis)].individual_privacy_lb;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < v.size() && i < fragment_sizes.size(); ++i) {
    num += v[i] * static_cast<double>(fragment_sizes[i]);
    den += static_cast<double>(fragment_sizes[i]);
  }
  return den > 0.0 ? num / den : 0.0;
}

double PrivacyReport::mean_utility(Axis axis) const {
  const auto& v = axes[static_cast<std::size_t>(axis)].output_utility;
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double PrivacyReport::fragment_size_variance() const {
  if (fragment_sizes.empty()) return 0.0;
  double mean = 0.0;
  for (auto s : fragment_sizes) mean += static_cast<double>(s);
  mean /= static_cast<double>(fragment_sizes.size());
  double var = 0.0;
  for (auto s : fragment_sizes) var += (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
  return var / static_cast<double>(fragment_sizes.size());
}

PrivacyReport evaluate_privacy(const std::vector<Fragment>& fragments, const std::vector<EncodedFragment>& encoded,
                               const std::vector<std::vector<KeyEntry>>& keys, const std::string& method_label,
                               const PrivacyEvalOptions& options) {
  require_same_length(fragments.size(), encoded.size(), "fragments vs encoded fragments");
  require_same_length(fragments.size(), keys.size(), "fragments vs keys");
  if (fragments.empty()) throw Error(Errc::empty_input, "no fragments to evaluate");

  PrivacyReport report;
  report.method_label = method_label;
  report.image_id = fragments.front().image_id;
  report.fragment_count = fragments.size();
  const std::size_t k = fragments.size();

  std::array<std::vector<SymbolList>, 2> private_axis;
  std::array<std::vector<SymbolList>, 2> encoded_axis;
  std::vector<SymbolList> outputs(k);
  std::vector<double> utility(k, 1.0);

  for (std::size_t i = 0; i < k; ++i) {
    const auto& frag = fragments[i];
    const auto& enc = encoded[i];
    report.fragment_sizes.push_back(frag.patch_count());
    require_same_length(frag.patch_count(), enc.encoded_rows.size(), "fragment vs encoded rows");

    for (std::size_t a = 0; a < 2; ++a) {
      SymbolList s;
      s.reserve(frag.patch_count());
      for (const auto& p : frag.patch_rows) s.push_back(a == 0 ? p.x : p.y);
      private_axis[a].push_back(std::move(s));

      const std::size_t col = std::min(a, enc.k_dims - 1);
      std::vector<double> z;
      z.reserve(enc.encoded_rows.size());
      for (const auto& row : enc.encoded_rows) z.push_back(row.values[col]);
      encoded_axis[a].push_back(quantize(z, options.bins));
    }

    SymbolList desired;
    for (const auto& p : frag.patch_rows) {
      desired.push_back(simulated_inference_label(frag.image_id, p.id, options.label_classes));
    }
    outputs[i] = desired;

    // The node that holds the encoded fragment sees the same payloads; its
    // outputs are recovered in key order and re-aligned to the private rows.
    std::unordered_map<std::string, PatchId> by_opaque;
    for (const auto& e : keys[i]) by_opaque.emplace(e.opaque_id, e.patch_id);
    std::unordered_map<PatchId, Symbol> estimated_by_patch;
    for (const auto& row : enc.encoded_rows) {
      auto it = by_opaque.find(row.opaque_id);
      if (it == by_opaque.end()) throw ValidationError("opaque_id", "encoded row missing from trusted key");
      estimated_by_patch.emplace(it->second, simulated_inference_label(frag.image_id, it->second, options.label_classes));
    }
    SymbolList estimated;
    for (const auto& p : frag.patch_rows) {
      auto it = estimated_by_patch.find(p.id);
      if (it == estimated_by_patch.end()) throw ValidationError("opaque_id", "private row has no encoded counterpart");
      estimated.push_back(it->second);
    }
    utility[i] = frag.patch_rows.empty() ? 1.0 : output_utility(desired, estimated);
  }

  for (std::size_t a = 0; a < 2; ++a) {
    auto& axis = report.axes[a];
    axis.aig = average_information_gain(private_axis[a], encoded_axis[a]);
    axis.output_utility = utility;
    if (k >= 2) {
      for (std::size_t h = 0; h < k; ++h) {
        axis.individual_privacy_lb.push_back(individual_privacy_lower_bound(private_axis[a], outputs, h, options.bins));
      }
    }
  }
  return report;
}

}  // namespace phc
