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

#include "phc/scenario.hpp"
#include "phc/splitter.hpp"

namespace phc {

/// Dense row-major matrix of doubles, sized for the n x 2 coordinate data the
/// encoder works on.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Normalized {
  Matrix centered;
  std::vector<double> mean;
  std::vector<double> stddev;
};

/// Column-wise (x - mean) / std with the sample (n-1) standard deviation.
/// Throws DegenerateVariance if a column is constant and TooFewRows if n < 2.
Normalized normalize(const Matrix& coords);

/// Same as normalize() but substitutes std = 1 for constant columns.
Normalized normalize_lenient(const Matrix& coords);

/// Sigma = A^T A / (n - 1).
Matrix covariance(const Matrix& centered);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  Matrix eigenvectors;              // column i pairs with eigenvalues[i]
};

/// Closed-form symmetric 2x2 eigensolver. Eigenvalues descend; the first
/// non-zero component of each eigenvector is positive.
EigenDecomposition eig_sorted(const Matrix& sigma);

struct EncodedRow {
  std::string opaque_id;
  std::vector<double> values;  // e1..ek
};

struct EncodedFragment {
  std::string image_id;
  std::size_t fragment_index = 0;
  std::string opaque_name;
  /// Sorted by opaque_id so storage order carries no positional information.
  std::vector<EncodedRow> encoded_rows;
  std::size_t k_dims = 2;
  std::uint64_t size_bytes = 0;
};

/// Per-image coordinate statistics, used when a fragment is too small to
/// normalise on its own.
struct ImageStats {
  double mean[2] = {0.0, 0.0};
  double stddev[2] = {1.0, 1.0};
};

ImageStats image_stats(const PatchSet& patches);

struct EncodeOptions {
  std::size_t k_dims = 2;
  double noise_scale = 0.05;
};

/// Noise -> normalise -> covariance -> eigen -> top-k projection -> rename.
/// Fragments with a single patch fall back to image-centred coordinates.
EncodedFragment encode_fragment(const Fragment& fragment, const EncodeOptions& options, std::uint64_t seed,
                                const std::optional<ImageStats>& fallback_stats = std::nullopt);

/// Trusted-zone mapping from opaque ids back to the original patches.
struct KeyEntry {
  std::string opaque_id;
  PatchId patch_id = 0;
  std::int32_t x = 0;
  std::int32_t y = 0;
};

std::string fragment_opaque_name(const std::string& image_id, std::size_t fragment_index, std::uint64_t seed);
std::vector<KeyEntry> trusted_key(const Fragment& fragment, std::uint64_t seed);

}  // namespace phc
