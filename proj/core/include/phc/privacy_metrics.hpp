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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phc/encoder.hpp"
#include "phc/splitter.hpp"

namespace phc {

using Symbol = std::int64_t;
using SymbolList = std::vector<Symbol>;

/// Plug-in Shannon entropy (bits) of the empirical symbol frequencies.
double shannon_entropy(std::span<const Symbol> values);

/// Equal-width binning over [min, max] with right-closed bins; the minimum
/// falls in bin 0. Constant input maps to symbol 0.
SymbolList quantize(std::span<const double> values, std::size_t bins);

/// Same binning over a caller-supplied range, so several streams share bins.
SymbolList quantize_range(std::span<const double> values, std::size_t bins, double lo, double hi);

/// I(X;Y) / ((H(X) + H(Y)) / 2), clamped to [0, 1]; 1 when both are constant.
double normalized_mutual_information(std::span<const Symbol> x, std::span<const Symbol> y);

/// Dense ids for the joint symbol (x_i, y_i), ordered lexicographically.
SymbolList pair_symbols(std::span<const Symbol> x, std::span<const Symbol> y);

/// Mean over fragments of H(Z_i) - H(S_i).
double average_information_gain(std::span<const SymbolList> private_frags,
                                std::span<const SymbolList> encoded_frags);

double output_utility(std::span<const Symbol> desired, std::span<const Symbol> estimated);

/// Normalised MI between the honest fragment's private values and the
/// adversary view built from every other fragment's (private value, output)
/// rows. Streams keep their storage order and are paired by quantile index
/// over the shorter length.
double individual_privacy_lower_bound(std::span<const SymbolList> fragments_private,
                                      std::span<const SymbolList> fragments_outputs, std::size_t honest_index,
                                      std::size_t bins);

/// Deterministic stand-in for the inference service: a keyed hash of the
/// patch payload id mapped onto `classes` labels.
Symbol simulated_inference_label(const std::string& image_id, PatchId patch_id, std::size_t classes);

enum class Axis : std::size_t { x = 0, y = 1 };

struct AxisMetrics {
  double aig = 0.0;
  std::vector<double> output_utility;         // one per fragment
  std::vector<double> individual_privacy_lb;  // one per honest-node choice
};

struct PrivacyReport {
  std::string method_label;
  std::string image_id;
  std::size_t fragment_count = 0;
  std::vector<std::size_t> fragment_sizes;
  std::array<AxisMetrics, 2> axes;

  [[nodiscard]] double mean_rho(Axis axis) const;
  /// Mean rho weighted by honest fragment size (per-patch view).
  [[nodiscard]] double patch_weighted_rho(Axis axis) const;
  [[nodiscard]] double mean_utility(Axis axis) const;
  [[nodiscard]] double fragment_size_variance() const;
};

struct PrivacyEvalOptions {
  std::size_t bins = 64;
  std::size_t label_classes = 2;
};

/// Computes the full metric set for one image's split. `encoded[i]` must be
/// the encoding of `fragments[i]` and `keys[i]` its trusted key (used to
/// recover the desired output of each encoded row).
PrivacyReport evaluate_privacy(const std::vector<Fragment>& fragments, const std::vector<EncodedFragment>& encoded,
                               const std::vector<std::vector<KeyEntry>>& keys, const std::string& method_label,
                               const PrivacyEvalOptions& options);

}  // namespace phc
