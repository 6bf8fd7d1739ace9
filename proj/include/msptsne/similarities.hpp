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

#include <span>
#include <vector>

#include "msptsne/types.hpp"

namespace msptsne {

/// Squared Euclidean distances between all pairs of rows. Symmetric with an
/// exactly zero diagonal.
struct DistanceMatrix {
  Matrix d2;

  Index size() const { return d2.rows(); }
};

/// Inverse variance of a Gaussian neighborhood.
struct Precision {
  double beta = 1.0;
};

enum class Normalization { RowStochastic, GlobalSumOne };

struct SimilarityMatrix {
  Matrix s;
  Normalization normalization = Normalization::RowStochastic;

  Index size() const { return s.rows(); }
};

/// Perplexities 2, 4, ..., 2^H used by the multi-scale similarities.
struct ScaleSet {
  int num_scales = 0;
  std::vector<double> perplexities;
};

DistanceMatrix squared_euclidean_distances(const Matrix& x);

/// Shannon entropy (natural log) of the row distribution
/// p_j ~ exp(-beta * d2_j / 2). `d2_row` excludes the point itself.
double row_entropy(std::span<const double> d2_row, double beta);

/// Fills `out` with the normalized row distribution for `beta`.
void row_distribution(std::span<const double> d2_row, double beta, std::span<double> out);

/// Bisection on beta so that the row entropy equals log(target_perplexity).
/// `row_index` is only used to label error messages.
Precision precision_for_perplexity(std::span<const double> d2_row, double target_perplexity,
                                   Index row_index = -1);

/// Row-stochastic SNE similarities with per-row calibrated precisions.
SimilarityMatrix hd_similarities_fixed(const DistanceMatrix& d2, double perplexity);

/// tau_ij = (sigma_ij + sigma_ji) / (2N).
SimilarityMatrix symmetrize_tsne(const SimilarityMatrix& sigma);

ScaleSet multiscale_num_levels(Index n);

/// Average over h of symmetrize_tsne(hd_similarities_fixed(d2, 2^h)).
SimilarityMatrix hd_similarities_multiscale(const DistanceMatrix& d2);

/// Student-t (one degree of freedom) similarities, normalized over all
/// ordered pairs.
SimilarityMatrix ld_similarities_student(const Matrix& y);

}  // namespace msptsne
