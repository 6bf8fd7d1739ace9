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
#include <iosfwd>
#include <string>
#include <vector>

#include "msptsne/types.hpp"

namespace msptsne {

enum class Activation : std::uint8_t { ReLU, Identity };

/// Fully connected network: ReLU on every hidden layer, linear output.
/// weights[l] is (layer_dims[l] x layer_dims[l + 1]) so that a batch maps as
/// A_{l+1} = act(A_l * W_l + b_l).
struct MlpModel {
  std::vector<int> layer_dims;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  std::vector<Activation> activations;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  std::size_t num_layers() const { return weights.size(); }
  std::size_t num_parameters() const;
};

bool operator==(const MlpModel& a, const MlpModel& b);

struct ForwardCache {
  /// activations[0] is the input batch; activations[l + 1] is the output of layer l.
  std::vector<Matrix> activations;
  std::vector<Matrix> pre_activations;
};

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamOptions options;
  std::vector<Matrix> m_weights, v_weights;
  std::vector<Vector> m_biases, v_biases;
  std::int64_t step = 0;
};

/// He-uniform weights (bound sqrt(6 / fan_in)), zero biases.
MlpModel init_mlp(const std::vector<int>& layer_dims, std::uint64_t seed);

/// Output rows depend only on the matching input row: evaluating a batch or
/// any partition of it gives bitwise identical rows.
/// Storage already held by `cache` is reused when the shapes match.
Matrix forward(const MlpModel& model, const Matrix& x, ForwardCache* cache = nullptr);

/// Per-layer upstream gradients, reused between calls.
struct BackwardWorkspace {
  std::vector<Matrix> delta;
};

Gradients backward(const MlpModel& model, const ForwardCache& cache, const Matrix& dloss_dy);
void backward(const MlpModel& model, const ForwardCache& cache, const Matrix& dloss_dy,
              Gradients& grads, BackwardWorkspace& workspace);

AdamState make_adam_state(const MlpModel& model, AdamOptions options = {});
void adam_step(MlpModel& model, const Gradients& grads, AdamState& state);

/// Little-endian "MSPT" model format.
std::string serialize_model(const MlpModel& model);
MlpModel deserialize_model(const std::string& bytes);
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

/// out = x * w + b, where every output entry accumulates x(i, k) * w(k, j)
/// over k in increasing order with the same instruction sequence regardless
/// of which rows share the call.
Matrix dense_affine(const Matrix& x, const Matrix& w, const Vector& b);
/// Same, writing into `out` (which must not alias `x`).
void dense_affine(const Matrix& x, const Matrix& w, const Vector& b, Matrix& out);

}  // namespace msptsne
