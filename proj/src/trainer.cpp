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

#include "msptsne/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

namespace msptsne {
namespace {

constexpr double kQFloor = 1e-12;
constexpr std::uint64_t kShuffleSeedOffset = 1;

void check_pair(const SimilarityMatrix& p, const SimilarityMatrix& q, const char* who) {
  if (p.size() != q.size() || p.s.cols() != q.s.cols())
    throw Error(std::string(who) + ": similarity matrices differ in size");
}

Matrix gather_rows(const Matrix& x, const std::vector<Index>& idx, Index begin, Index end) {
  Matrix out(end - begin, x.cols());
  for (Index r = begin; r < end; ++r) out.row(r - begin) = x.row(idx[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw Error("config: epochs must be >= 1");
  if (cfg.batch_size < 16) throw Error("config: batch size must be >= 16");
  if (cfg.full_batch_threshold < 1) throw Error("config: full-batch threshold must be >= 1");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
    throw Error("config: learning rate must be positive");
  if (cfg.layer_widths.empty()) throw Error("config: need at least one hidden layer");
  for (int w : cfg.layer_widths)
    if (w < 1) throw Error("config: layer widths must be >= 1");
  if (cfg.output_dim < 1) throw Error("config: output dimension must be >= 1");
  if (cfg.mode == SimilarityMode::Fixed) {
    if (!std::isfinite(cfg.perplexity) || cfg.perplexity <= 1.0)
      throw Error("config: perplexity must be > 1");
    if (cfg.perplexity >= cfg.batch_size - 1)
      throw Error("config: perplexity must be below batch size - 1 (" +
                  std::to_string(cfg.batch_size - 1) + ")");
  }
}

std::vector<Index> batch_sizes(Index n, const TrainConfig& cfg) {
  if (n <= cfg.full_batch_threshold) return {n};
  const Index count = (n + cfg.batch_size - 1) / cfg.batch_size;
  std::vector<Index> sizes(static_cast<std::size_t>(count), n / count);
  for (Index i = 0; i < n % count; ++i) ++sizes[static_cast<std::size_t>(i)];
  return sizes;
}

double kl_loss(const SimilarityMatrix& p, const SimilarityMatrix& q) {
  check_pair(p, q, "kl_loss");
  const Index n = p.size();
  double loss = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double pij = p.s(i, j);
      if (i == j || pij <= 0.0) continue;
      loss += pij * std::log(pij / std::max(q.s(i, j), kQFloor));
    }
  }
  return loss;
}

Matrix kl_grad_embedding(const SimilarityMatrix& p, const SimilarityMatrix& q, const Matrix& y) {
  check_pair(p, q, "kl_grad_embedding");
  const Index n = y.rows();
  if (p.size() != n) throw Error("kl_grad_embedding: embedding has " + std::to_string(n) +
                                 " rows, similarities have " + std::to_string(p.size()));
  Matrix grad = Matrix::Zero(n, y.cols());
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const auto diff = (y.row(i) - y.row(j)).eval();
      const double w = 1.0 / (1.0 + diff.squaredNorm());
      // p and q are symmetric, so the pair contributes equal and opposite forces.
      const double f = 4.0 * (p.s(i, j) - q.s(i, j)) * w;
      grad.row(i) += f * diff;
      grad.row(j) -= f * diff;
    }
  }
  return grad;
}

SimilarityMatrix hd_similarities(const Matrix& x, const TrainConfig& cfg) {
  const DistanceMatrix d2 = squared_euclidean_distances(x);
  if (cfg.mode == SimilarityMode::Multiscale) return hd_similarities_multiscale(d2);
  return symmetrize_tsne(hd_similarities_fixed(d2, cfg.perplexity));
}

BatchLoss batch_loss_and_gradients(const MlpModel& model, const Matrix& x,
                                   const SimilarityMatrix& p) {
  BatchLoss out;
  BatchWorkspace workspace;
  batch_loss_and_gradients(model, x, p, out, workspace);
  return out;
}

void batch_loss_and_gradients(const MlpModel& model, const Matrix& x, const SimilarityMatrix& p,
                              BatchLoss& out, BatchWorkspace& workspace) {
  out.embedding = forward(model, x, &workspace.cache);
  const SimilarityMatrix q = ld_similarities_student(out.embedding);
  out.loss = kl_loss(p, q);
  backward(model, workspace.cache, kl_grad_embedding(p, q, out.embedding), out.grads,
           workspace.backward);
}

FitResult fit(const Matrix& x, const TrainConfig& cfg) {
  validate(cfg);
  const Index n = x.rows();
  if (x.cols() < 1) throw Error("fit: data has no columns");
  if (!x.allFinite()) throw Error("fit: data contains non-finite values");
  const std::vector<Index> sizes = batch_sizes(n, cfg);
  const Index smallest = *std::min_element(sizes.begin(), sizes.end());
  if (cfg.mode == SimilarityMode::Multiscale && smallest < 8)
    throw Error("fit: multi-scale training needs at least 8 points per batch, got " +
                std::to_string(smallest));
  if (cfg.mode == SimilarityMode::Fixed && !(cfg.perplexity < static_cast<double>(smallest) - 1.0))
    throw Error("fit: perplexity " + std::to_string(cfg.perplexity) +
                " too large for batches of " + std::to_string(smallest) + " points");

  std::vector<int> dims{static_cast<int>(x.cols())};
  dims.insert(dims.end(), cfg.layer_widths.begin(), cfg.layer_widths.end());
  dims.push_back(cfg.output_dim);

  FitResult result;
  result.model = init_mlp(dims, cfg.seed);
  AdamOptions adam;
  adam.learning_rate = cfg.learning_rate;
  AdamState state = make_adam_state(result.model, adam);

  auto similarities = [&](const Matrix& batch) {
    try {
      return hd_similarities(batch, cfg);
    } catch (const Error& e) {
      throw Error(std::string(e.what()) +
                  " (duplicate rows in the training data? try the --jitter or --dedup option)");
    }
  };

  const bool full_batch = sizes.size() == 1;
  SimilarityMatrix full_p;
  if (full_batch) full_p = similarities(x);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 shuffle_rng(cfg.seed + kShuffleSeedOffset);

  BatchLoss step;
  BatchWorkspace workspace;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    if (full_batch) {
      batch_loss_and_gradients(result.model, x, full_p, step, workspace);
      adam_step(result.model, step.grads, state);
      loss_sum = step.loss;
    } else {
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      Index begin = 0;
      for (Index size : sizes) {
        const Matrix batch = gather_rows(x, order, begin, begin + size);
        begin += size;
        batch_loss_and_gradients(result.model, batch, similarities(batch), step, workspace);
        adam_step(result.model, step.grads, state);
        loss_sum += step.loss;
      }
    }
    const double loss = loss_sum / static_cast<double>(sizes.size());
    if (!std::isfinite(loss)) throw Error("fit: loss became non-finite at epoch " + std::to_string(epoch + 1));
    result.log.epoch_loss.push_back(loss);
    result.log.epoch_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (cfg.log_every > 0 && ((epoch + 1) % cfg.log_every == 0 || epoch + 1 == cfg.epochs))
      std::clog << "epoch " << epoch + 1 << "/" << cfg.epochs << " loss " << loss << '\n';
  }

  result.embedding = transform(result.model, x);
  if (full_batch) {
    result.log.final_loss = kl_loss(full_p, ld_similarities_student(result.embedding));
  } else {
    double sum = 0.0;
    Index begin = 0;
    for (Index size : sizes) {
      const Matrix batch = gather_rows(x, order, begin, begin + size);
      const Matrix y = gather_rows(result.embedding, order, begin, begin + size);
      sum += kl_loss(similarities(batch), ld_similarities_student(y));
      begin += size;
    }
    result.log.final_loss = sum / static_cast<double>(sizes.size());
  }
  return result;
}

Matrix transform(const MlpModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim())
    throw Error("transform: input has " + std::to_string(x.cols()) +
                " columns, model expects M = " + std::to_string(model.input_dim()));
  return forward(model, x);
}

}  // namespace msptsne
