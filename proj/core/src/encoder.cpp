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

#include "phc/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "phc/errors.hpp"
#include "phc/keyed_hash.hpp"
#include "phc/rng.hpp"

namespace phc {

namespace {

Normalized normalize_impl(const Matrix& coords, bool lenient) {
  const std::size_t n = coords.rows();
  const std::size_t m = coords.cols();
  if (n < 2) throw Error(Errc::too_few_rows, "normalisation needs at least two rows");
  Normalized out{Matrix(n, m), std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (std::size_t c = 0; c < m; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += coords(r, c);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (coords(r, c) - mean) * (coords(r, c) - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0)) {
      if (!lenient) {
        throw Error(Errc::degenerate_variance, "column " + std::to_string(c) + " has zero variance");
      }
      sd = 1.0;
    }
    out.mean[c] = mean;
    out.stddev[c] = sd;
    for (std::size_t r = 0; r < n; ++r) out.centered(r, c) = (coords(r, c) - mean) / sd;
  }
  return out;
}

std::string patch_label(const std::string& image_id, PatchId id) {
  return image_id + '\x1f' + "patch" + '\x1f' + std::to_string(id);
}

void positive_leading(double& a, double& b) {
  if (a < 0.0 || (a == 0.0 && b < 0.0)) {
    a = -a;
    b = -b;
  }
  // Normalise negative zero so serialised output is stable.
  a += 0.0;
  b += 0.0;
}

}  // namespace

Normalized normalize(const Matrix& coords) { return normalize_impl(coords, false); }

Normalized normalize_lenient(const Matrix& coords) { return normalize_impl(coords, true); }

Matrix covariance(const Matrix& centered) {
  const std::size_t n = centered.rows();
  const std::size_t m = centered.cols();
  if (n < 2) throw Error(Errc::too_few_rows, "covariance needs at least two rows");
  Matrix sigma(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += centered(r, i) * centered(r, j);
      sigma(i, j) = acc / static_cast<double>(n - 1);
      sigma(j, i) = sigma(i, j);
    }
  }
  return sigma;
}

EigenDecomposition eig_sorted(const Matrix& sigma) {
  if (sigma.rows() != 2 || sigma.cols() != 2) throw ValidationError("sigma", "eig_sorted expects a 2x2 matrix");
  const double a = sigma(0, 0);
  const double b = sigma(0, 1);
  const double c = sigma(1, 1);
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(sigma(1, 0))) {
    throw Error(Errc::convergence_failure, "matrix has non-finite entries");
  }
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), 1.0});
  if (std::abs(b - sigma(1, 0)) > 1e-12 * scale) throw ValidationError("sigma", "matrix is not symmetric");

  const double half_trace = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  EigenDecomposition out{{half_trace + radius, half_trace - radius}, Matrix(2, 2)};

  double v1x;
  double v1y;
  if (b == 0.0) {
    if (a >= c) {
      v1x = 1.0;
      v1y = 0.0;
    } else {
      v1x = 0.0;
      v1y = 1.0;
    }
  } else if (a >= c) {
    v1x = out.eigenvalues[0] - c;
    v1y = b;
  } else {
    v1x = b;
    v1y = out.eigenvalues[0] - a;
  }
  const double len = std::hypot(v1x, v1y);
  v1x /= len;
  v1y /= len;
  double v2x = -v1y;
  double v2y = v1x;
  positive_leading(v1x, v1y);
  positive_leading(v2x, v2y);
  out.eigenvectors(0, 0) = v1x;
  out.eigenvectors(1, 0) = v1y;
  out.eigenvectors(0, 1) = v2x;
  out.eigenvectors(1, 1) = v2y;
  return out;
}

ImageStats image_stats(const PatchSet& patches) {
  ImageStats s;
  const std::size_t n = patches.size();
  if (n == 0) return s;
  for (int c = 0; c < 2; ++c) {
    double sum = 0.0;
    for (const auto& p : patches.patches) sum += c == 0 ? p.x : p.y;
    s.mean[c] = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& p : patches.patches) {
      const double d = (c == 0 ? p.x : p.y) - s.mean[c];
      ss += d * d;
    }
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    s.stddev[c] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::string fragment_opaque_name(const std::string& image_id, std::size_t fragment_index, std::uint64_t seed) {
  const auto key = HashKey::derive(seed, "phc/rename");
  return key.hex_digest(image_id + '\x1f' + "fragment" + '\x1f' + std::to_string(fragment_index));
}

std::vector<KeyEntry> trusted_key(const Fragment& fragment, std::uint64_t seed) {
  const auto key = HashKey::derive(seed, "phc/rename");
  std::vector<KeyEntry> out;
  out.reserve(fragment.patch_rows.size());
  for (const auto& p : fragment.patch_rows) {
    out.push_back({key.hex_digest(patch_label(fragment.image_id, p.id)), p.id, p.x, p.y});
  }
  std::sort(out.begin(), out.end(), [](const KeyEntry& l, const KeyEntry& r) { return l.opaque_id < r.opaque_id; });
  return out;
}

EncodedFragment encode_fragment(const Fragment& fragment, const EncodeOptions& options, std::uint64_t seed,
                                const std::optional<ImageStats>& fallback_stats) {
  if (options.k_dims < 1 || options.k_dims > 2) throw ValidationError("k_dims", "k_dims must be 1 or 2");
  if (!(options.noise_scale >= 0.0)) throw ValidationError("noise_scale", "noise_scale must be >= 0");

  EncodedFragment out;
  out.image_id = fragment.image_id;
  out.fragment_index = fragment.fragment_index;
  out.opaque_name = fragment_opaque_name(fragment.image_id, fragment.fragment_index, seed);
  out.k_dims = options.k_dims;
  out.size_bytes = fragment.size_bytes;

  const std::size_t n = fragment.patch_rows.size();
  const auto key = HashKey::derive(seed, "phc/rename");
  Rng noise(derive_seed(seed, "noise/" + fragment.image_id + "/" + std::to_string(fragment.fragment_index)));

  Matrix coords(n, 2);
  for (std::size_t r = 0; r < n; ++r) {
    coords(r, 0) = fragment.patch_rows[r].x;
    coords(r, 1) = fragment.patch_rows[r].y;
  }

  Matrix projected(n, options.k_dims);
  if (n >= 2) {
    // Noise is expressed in normalised units, i.e. scaled by each column's spread.
    if (options.noise_scale > 0.0) {
      const auto spread = normalize_lenient(coords).stddev;
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < 2; ++c) coords(r, c) += options.noise_scale * spread[c] * noise.normal();
      }
    }
    const auto norm = normalize_lenient(coords);
    const auto eig = eig_sorted(covariance(norm.centered));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < options.k_dims; ++k) {
        projected(r, k) = norm.centered(r, 0) * eig.eigenvectors(0, k) + norm.centered(r, 1) * eig.eigenvectors(1, k);
      }
    }
  } else if (n == 1) {
    const ImageStats stats = fallback_stats.value_or(ImageStats{});
    for (std::size_t k = 0; k < options.k_dims; ++k) {
      projected(0, k) = (coords(0, k) - stats.mean[k]) / stats.stddev[k] + options.noise_scale * noise.normal();
    }
  }

  out.encoded_rows.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    EncodedRow row;
    row.opaque_id = key.hex_digest(patch_label(fragment.image_id, fragment.patch_rows[r].id));
    row.values.resize(options.k_dims);
    for (std::size_t k = 0; k < options.k_dims; ++k) row.values[k] = projected(r, k) + 0.0;
    out.encoded_rows.push_back(std::move(row));
  }
  std::sort(out.encoded_rows.begin(), out.encoded_rows.end(),
            [](const EncodedRow& l, const EncodedRow& r) { return l.opaque_id < r.opaque_id; });
  return out;
}

}  // namespace phc
