/*
 * Copyright 2026 The msptsne Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msptsne/types.hpp"

namespace msptsne {

struct Dataset {
  Matrix x;
  /// Annotation only; never used for training.
  std::optional<std::vector<long long>> labels;
  std::string name;

  Index size() const { return x.rows(); }
};

struct Split {
  std::vector<Index> train_indices;
  std::vector<Index> test_indices;
  std::uint64_t seed = 0;
};

struct HelixOptions {
  int coils = 10;
  double z_amplitude = 1.0;
};

/// Closed helix (cos 2πt, sin 2πt, a cos 2π·coils·t) at t = i / n plus
/// isotropic Gaussian noise. Labels are the coil index floor(coils · t).
Dataset gen_helix(Index n, double noise_sd, std::uint64_t seed, HelixOptions options = {});

struct CsvOptions {
  bool has_labels = false;
  bool skip_header = false;
};

Dataset load_csv(const std::string& path, CsvOptions options = {});
void save_csv(const Matrix& x, const std::vector<long long>* labels, const std::string& path);

Split train_test_split(Index n, double test_fraction, std::uint64_t seed);

Matrix select_rows(const Matrix& x, const std::vector<Index>& rows);
std::vector<long long> select_labels(const std::vector<long long>& labels,
                                     const std::vector<Index>& rows);

/// Rescales each column to [0, 1]; constant columns become 0.
void minmax_scale(Matrix& x);

/// Drops exact duplicate rows, keeping the first occurrence.
Dataset remove_duplicate_rows(const Dataset& data);

/// Adds N(0, sd^2) noise to every coordinate.
void add_jitter(Matrix& x, double sd, std::uint64_t seed);

}  // namespace msptsne
