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

#include <vector>

#include "msptsne/similarities.hpp"

namespace msptsne {

/// For each point, the other N - 1 points ordered by (distance, index).
struct NeighborTable {
  Index n = 0;
  std::vector<std::vector<Index>> order;
};

/// Q_NX(K), R_NX(K) for K = 1..N-2 (element K-1) and the 1/K-weighted AUC.
struct QualityCurve {
  Index n = 0;
  std::vector<double> qnx;
  std::vector<double> rnx;
  double auc = 0.0;
};

NeighborTable neighbor_table(const DistanceMatrix& d2);

std::vector<double> qnx_curve(const NeighborTable& hd, const NeighborTable& ld);
std::vector<double> rnx_curve(const std::vector<double>& qnx, Index n);
double auc_log_k(const std::vector<double>& rnx);

QualityCurve evaluate_embedding(const Matrix& hd, const Matrix& ld);

}  // namespace msptsne
