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

#include "msptsne/quality.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace msptsne {

NeighborTable neighbor_table(const DistanceMatrix& d2) {
  const Index n = d2.size();
  if (n < 3) throw Error("neighbor_table: need at least 3 points");
  NeighborTable table{n, std::vector<std::vector<Index>>(static_cast<std::size_t>(n))};
  for (Index i = 0; i < n; ++i) {
    auto& row = table.order[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(n - 1));
    for (Index j = 0; j < n; ++j)
      if (j != i) row.push_back(j);
    std::sort(row.begin(), row.end(), [&](Index a, Index b) {
      const double da = d2.d2(i, a), db = d2.d2(i, b);
      return da < db || (da == db && a < b);
    });
  }
  return table;
}

std::vector<double> qnx_curve(const NeighborTable& hd, const NeighborTable& ld) {
  if (hd.n != ld.n) throw Error("qnx_curve: neighbor tables differ in size");
  const Index n = hd.n;
  const Index kmax = n - 2;
  // A pair (i, j) with HD rank a and LD rank b (1-based) is shared by both
  // K-neighborhoods exactly when K >= max(a, b).
  std::vector<long long> first_shared(static_cast<std::size_t>(n), 0);
  std::vector<Index> ld_rank(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& ld_row = ld.order[static_cast<std::size_t>(i)];
    for (std::size_t r = 0; r < ld_row.size(); ++r)
      ld_rank[static_cast<std::size_t>(ld_row[r])] = static_cast<Index>(r) + 1;
    const auto& hd_row = hd.order[static_cast<std::size_t>(i)];
    for (std::size_t r = 0; r < hd_row.size(); ++r) {
      const Index k = std::max(static_cast<Index>(r) + 1, ld_rank[static_cast<std::size_t>(hd_row[r])]);
      ++first_shared[static_cast<std::size_t>(k)];
    }
  }
  std::vector<double> qnx(static_cast<std::size_t>(kmax));
  long long overlap = 0;
  for (Index k = 1; k <= kmax; ++k) {
    overlap += first_shared[static_cast<std::size_t>(k)];
    qnx[static_cast<std::size_t>(k - 1)] =
        static_cast<double>(overlap) / (static_cast<double>(k) * static_cast<double>(n));
  }
  return qnx;
}

std::vector<double> rnx_curve(const std::vector<double>& qnx, Index n) {
  if (static_cast<Index>(qnx.size()) != n - 2)
    throw Error("rnx_curve: expected " + std::to_string(n - 2) + " Q_NX values");
  std::vector<double> rnx(qnx.size());
  const double nm1 = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < qnx.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    rnx[i] = (nm1 * qnx[i] - k) / (nm1 - k);
  }
  return rnx;
}

double auc_log_k(const std::vector<double>& rnx) {
  if (rnx.empty()) throw Error("auc_log_k: empty curve");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rnx.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    num += rnx[i] / k;
    den += 1.0 / k;
  }
  return num / den;
}

QualityCurve evaluate_embedding(const Matrix& hd, const Matrix& ld) {
  if (hd.rows() != ld.rows())
    throw Error("evaluate_embedding: HD has " + std::to_string(hd.rows()) + " rows, LD has " +
                std::to_string(ld.rows()));
  if (hd.rows() < 4) throw Error("evaluate_embedding: need at least 4 points");
  QualityCurve curve;
  curve.n = hd.rows();
  curve.qnx = qnx_curve(neighbor_table(squared_euclidean_distances(hd)),
                        neighbor_table(squared_euclidean_distances(ld)));
  curve.rnx = rnx_curve(curve.qnx, curve.n);
  curve.auc = auc_log_k(curve.rnx);
  return curve;
}

}  // namespace msptsne
