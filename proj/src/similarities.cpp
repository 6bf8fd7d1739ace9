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

#include "msptsne/similarities.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace msptsne {
namespace {

constexpr double kMinBeta = 1e-20;
constexpr double kMaxBeta = 1e20;
constexpr int kMaxBisections = 200;
// The search stops at kEntropySearchTol; a result is rejected only when its
// entropy gap exceeds kEntropyAcceptTol.
constexpr double kEntropySearchTol = 1e-10;
constexpr double kEntropyAcceptTol = 1e-5;

std::string row_label(Index row) {
  return row < 0 ? std::string("row") : "row " + std::to_string(row);
}

}  // namespace

DistanceMatrix squared_euclidean_distances(const Matrix& x) {
  const Index n = x.rows();
  if (n < 2) throw Error("squared_euclidean_distances: need at least 2 points");
  for (Index i = 0; i < n; ++i) {
    if (!x.row(i).allFinite())
      throw Error("squared_euclidean_distances: non-finite coordinate in row " + std::to_string(i));
  }
  DistanceMatrix out{Matrix::Zero(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = (x.row(i) - x.row(j)).squaredNorm();
      out.d2(i, j) = d;
      out.d2(j, i) = d;
    }
  }
  return out;
}

double row_entropy(std::span<const double> d2_row, double beta) {
  const double dmin = *std::min_element(d2_row.begin(), d2_row.end());
  double z = 0.0;
  double weighted = 0.0;
  for (double d : d2_row) {
    const double shifted = d - dmin;
    const double w = std::exp(-0.5 * beta * shifted);
    z += w;
    weighted += w * shifted;
  }
  return std::log(z) + 0.5 * beta * weighted / z;
}

void row_distribution(std::span<const double> d2_row, double beta, std::span<double> out) {
  const double dmin = *std::min_element(d2_row.begin(), d2_row.end());
  double z = 0.0;
  for (std::size_t j = 0; j < d2_row.size(); ++j) {
    out[j] = std::exp(-0.5 * beta * (d2_row[j] - dmin));
    z += out[j];
  }
  for (double& v : out) v /= z;
}

Precision precision_for_perplexity(std::span<const double> d2_row, double target_perplexity,
                                   Index row_index) {
  const auto n = static_cast<double>(d2_row.size());
  if (d2_row.empty()) throw Error("precision_for_perplexity: empty distance row");
  if (!std::isfinite(target_perplexity) || target_perplexity <= 1.0)
    throw Error("precision_for_perplexity: perplexity must be > 1, got " +
                std::to_string(target_perplexity));
  bool any_positive = false;
  for (double d : d2_row) {
    if (!std::isfinite(d) || d < 0.0)
      throw Error("precision_for_perplexity: invalid distance in " + row_label(row_index));
    any_positive = any_positive || d > 0.0;
  }
  if (!any_positive)
    throw Error("precision_for_perplexity: " + row_label(row_index) +
                " has zero distance to every other point (duplicate point)");
  if (target_perplexity > n + 1e-12)
    throw Error("precision_for_perplexity: perplexity " + std::to_string(target_perplexity) +
                " unattainable for " + row_label(row_index) + " with " +
                std::to_string(d2_row.size()) + " neighbors");

  const double target = std::log(target_perplexity);
  auto gap = [&](double beta) { return row_entropy(d2_row, beta) - target; };

  double beta = 1.0;
  double g = gap(beta);
  if (std::abs(g) <= kEntropySearchTol) return {beta};

  // Entropy decreases with beta: bracket the root by doubling or halving.
  double lo = beta, hi = beta;
  if (g > 0.0) {
    while (g > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > kMaxBeta) {
        // Entropy cannot fall below log(number of nearest neighbors tied at
        // the minimum distance); the limit is uniform over those ties.
        const double nearest = *std::min_element(d2_row.begin(), d2_row.end());
        const auto ties = std::count(d2_row.begin(), d2_row.end(), nearest);
        if (std::log(static_cast<double>(ties)) >= target - kEntropyAcceptTol) return {kMaxBeta};
        throw Error("precision_for_perplexity: perplexity " + std::to_string(target_perplexity) +
                    " unattainable for " + row_label(row_index) + " (beta upper bound reached)");
      }
      g = gap(hi);
    }
  } else {
    while (g < 0.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < kMinBeta)
        throw Error("precision_for_perplexity: perplexity " + std::to_string(target_perplexity) +
                    " unattainable for " + row_label(row_index) + " (beta lower bound reached)");
      g = gap(lo);
    }
  }

  double best_beta = std::abs(gap(lo)) < std::abs(gap(hi)) ? lo : hi;
  double best_gap = std::abs(gap(best_beta));
  for (int it = 0; it < kMaxBisections && best_gap > kEntropySearchTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = gap(mid);
    if (std::abs(gm) < best_gap) {
      best_gap = std::abs(gm);
      best_beta = mid;
    }
    if (gm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if (best_gap > kEntropyAcceptTol)
    throw Error("precision_for_perplexity: perplexity " + std::to_string(target_perplexity) +
                " unattainable for " + row_label(row_index) + " (entropy gap " +
                std::to_string(best_gap) + ")");
  return {best_beta};
}

SimilarityMatrix hd_similarities_fixed(const DistanceMatrix& d2, double perplexity) {
  const Index n = d2.size();
  if (n < 2) throw Error("hd_similarities_fixed: need at least 2 points");
  SimilarityMatrix out{Matrix::Zero(n, n), Normalization::RowStochastic};
  std::vector<double> row(static_cast<std::size_t>(n - 1));
  std::vector<double> prob(row.size());
  for (Index i = 0; i < n; ++i) {
    std::size_t k = 0;
    for (Index j = 0; j < n; ++j)
      if (j != i) row[k++] = d2.d2(i, j);
    const Precision p = precision_for_perplexity(row, perplexity, i);
    row_distribution(row, p.beta, prob);
    k = 0;
    for (Index j = 0; j < n; ++j)
      if (j != i) out.s(i, j) = prob[k++];
  }
  return out;
}

SimilarityMatrix symmetrize_tsne(const SimilarityMatrix& sigma) {
  if (sigma.normalization != Normalization::RowStochastic)
    throw Error("symmetrize_tsne: input must be row-stochastic");
  const Index n = sigma.size();
  const double denom = 2.0 * static_cast<double>(n);
  SimilarityMatrix out{Matrix::Zero(n, n), Normalization::GlobalSumOne};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double v = (sigma.s(i, j) + sigma.s(j, i)) / denom;
      out.s(i, j) = v;
      out.s(j, i) = v;
    }
  }
  return out;
}

ScaleSet multiscale_num_levels(Index n) {
  if (n < 8)
    throw Error("multiscale_num_levels: too few points for multi-scale (N = " +
                std::to_string(n) + ", need >= 8)");
  ScaleSet set;
  set.num_scales = static_cast<int>(std::lround(std::log2(static_cast<double>(n) / 2.0)));
  const double cap = static_cast<double>(n - 2);
  for (int h = 1; h <= set.num_scales; ++h) {
    double perplexity = std::ldexp(1.0, h);
    if (perplexity > cap) {
      std::clog << "notice: multi-scale perplexity " << perplexity << " clamped to " << cap
                << " for N = " << n << '\n';
      perplexity = cap;
    }
    set.perplexities.push_back(perplexity);
  }
  return set;
}

SimilarityMatrix hd_similarities_multiscale(const DistanceMatrix& d2) {
  const Index n = d2.size();
  const ScaleSet scales = multiscale_num_levels(n);
  SimilarityMatrix out{Matrix::Zero(n, n), Normalization::GlobalSumOne};
  for (double perplexity : scales.perplexities)
    out.s += symmetrize_tsne(hd_similarities_fixed(d2, perplexity)).s;
  out.s /= static_cast<double>(scales.num_scales);
  return out;
}

SimilarityMatrix ld_similarities_student(const Matrix& y) {
  const Index n = y.rows();
  if (n < 2) throw Error("ld_similarities_student: need at least 2 points");
  SimilarityMatrix out{Matrix::Zero(n, n), Normalization::GlobalSumOne};
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double w = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
      out.s(i, j) = w;
      total += w;
    }
  }
  total *= 2.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double q = out.s(i, j) / total;
      out.s(i, j) = q;
      out.s(j, i) = q;
    }
  }
  return out;
}

}  // namespace msptsne
