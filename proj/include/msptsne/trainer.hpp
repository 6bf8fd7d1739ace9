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
#include <vector>

#include "msptsne/neural_net.hpp"
#include "msptsne/similarities.hpp"

namespace msptsne {

enum class SimilarityMode { Multiscale, Fixed };

struct TrainConfig {
  SimilarityMode mode = SimilarityMode::Multiscale;
  double perplexity = 30.0;  // fixed mode only
  int epochs = 500;
  int batch_size = 1000;
  Index full_batch_threshold = 2048;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  std::vector<int> layer_widths{500, 500, 2000, 500};
  int output_dim = 2;
  int log_every = 0;  // 0 disables progress lines on stderr
};

/// Checks that do not depend on the data.
void validate(const TrainConfig& cfg);

/// Sizes of the batches used for a training set of n rows: a single batch of
/// n when n <= full_batch_threshold, otherwise ceil(n / batch_size) batches
/// whose sizes differ by at most one.
std::vector<Index> batch_sizes(Index n, const TrainConfig& cfg);

struct TrainLog {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_seconds;
  double final_loss = 0.0;
};

struct FitResult {
  MlpModel model;
  TrainLog log;
  /// Embedding of the full training set by the final model.
  Matrix embedding;
};

double kl_loss(const SimilarityMatrix& p, const SimilarityMatrix& q);

/// dC/dy_i = 4 sum_j (p_ij - q_ij) (1 + |y_i - y_j|^2)^-1 (y_i - y_j)
Matrix kl_grad_embedding(const SimilarityMatrix& p, const SimilarityMatrix& q, const Matrix& y);

/// Joint HD similarities for a batch according to cfg.mode.
SimilarityMatrix hd_similarities(const Matrix& x, const TrainConfig& cfg);

/// Loss and parameter gradients for one batch with precomputed HD similarities.
struct BatchLoss {
  double loss = 0.0;
  Gradients grads;
  Matrix embedding;
};
BatchLoss batch_loss_and_gradients(const MlpModel& model, const Matrix& x,
                                   const SimilarityMatrix& p);

/// Buffers reused across training steps.
struct BatchWorkspace {
  ForwardCache cache;
  BackwardWorkspace backward;
};
void batch_loss_and_gradients(const MlpModel& model, const Matrix& x, const SimilarityMatrix& p,
                              BatchLoss& out, BatchWorkspace& workspace);

FitResult fit(const Matrix& x, const TrainConfig& cfg);

/// Out-of-sample projection; each output row depends only on its input row.
Matrix transform(const MlpModel& model, const Matrix& x);

}  // namespace msptsne
