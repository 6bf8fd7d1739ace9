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

#include "msptsne/neural_net.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace msptsne {
namespace {

constexpr char kMagic[4] = {'M', 'S', 'P', 'T'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kMaxDim = 1u << 24;

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 3)
    throw Error("init_mlp: need input, at least one hidden layer and output dims");
  for (int d : dims)
    if (d < 1) throw Error("init_mlp: layer dims must be >= 1");
}

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) put(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) put(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::size_t size() const { return out_.size(); }
  const std::string& str() const { return out_; }
  std::uint64_t byte_sum(std::size_t from) const {
    std::uint64_t s = 0;
    for (std::size_t i = from; i < out_.size(); ++i) s += static_cast<std::uint8_t>(out_[i]);
    return s;
  }

 private:
  void put(std::uint8_t b) { out_.push_back(static_cast<char>(b)); }
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& in) : in_(in) {}
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{byte(pos_ + i)} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{byte(pos_ + i)} << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }
  std::uint64_t byte_sum(std::size_t from, std::size_t to) const {
    std::uint64_t s = 0;
    for (std::size_t i = from; i < to; ++i) s += byte(i);
    return s;
  }

 private:
  std::uint8_t byte(std::size_t i) const { return static_cast<std::uint8_t>(in_[i]); }
  void need(std::size_t n, const char* what) const {
    if (remaining() < n)
      throw Error(std::string("model stream truncated while reading ") + what);
  }
  const std::string& in_;
  std::size_t pos_ = 0;
};

std::vector<Activation> default_activations(std::size_t layers) {
  std::vector<Activation> acts(layers, Activation::ReLU);
  acts.back() = Activation::Identity;
  return acts;
}

}  // namespace

std::size_t MlpModel::num_parameters() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l)
    n += static_cast<std::size_t>(weights[l].size() + biases[l].size());
  return n;
}

bool operator==(const MlpModel& a, const MlpModel& b) {
  if (a.layer_dims != b.layer_dims || a.activations != b.activations) return false;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (a.weights[l] != b.weights[l] || a.biases[l] != b.biases[l]) return false;
  }
  return true;
}

MlpModel init_mlp(const std::vector<int>& layer_dims, std::uint64_t seed) {
  check_dims(layer_dims);
  MlpModel model;
  model.layer_dims = layer_dims;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const int fan_in = layer_dims[l];
    const int fan_out = layer_dims[l + 1];
    const double bound = std::sqrt(6.0 / fan_in);
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix w(fan_in, fan_out);
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = dist(rng);
    model.weights.push_back(std::move(w));
    model.biases.push_back(Vector::Zero(fan_out));
  }
  model.activations = default_activations(model.weights.size());
  return model;
}

Matrix forward(const MlpModel& model, const Matrix& x, ForwardCache* cache) {
  if (x.cols() != model.input_dim())
    throw Error("forward: input has " + std::to_string(x.cols()) + " columns, model expects " +
                std::to_string(model.input_dim()));
  const std::size_t layers = model.num_layers();
  if (cache == nullptr) {
    Matrix a = x, z;
    for (std::size_t l = 0; l < layers; ++l) {
      dense_affine(a, model.weights[l], model.biases[l], z);
      if (model.activations[l] == Activation::ReLU)
        a = z.cwiseMax(0.0);
      else
        a.swap(z);
    }
    return a;
  }
  cache->activations.resize(layers + 1);
  cache->pre_activations.resize(layers);
  cache->activations[0] = x;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix& z = cache->pre_activations[l];
    dense_affine(cache->activations[l], model.weights[l], model.biases[l], z);
    if (model.activations[l] == Activation::ReLU)
      cache->activations[l + 1] = z.cwiseMax(0.0);
    else
      cache->activations[l + 1] = z;
  }
  return cache->activations.back();
}

Gradients backward(const MlpModel& model, const ForwardCache& cache, const Matrix& dloss_dy) {
  Gradients grads;
  BackwardWorkspace workspace;
  backward(model, cache, dloss_dy, grads, workspace);
  return grads;
}

void backward(const MlpModel& model, const ForwardCache& cache, const Matrix& dloss_dy,
              Gradients& grads, BackwardWorkspace& workspace) {
  const std::size_t layers = model.num_layers();
  if (cache.activations.size() != layers + 1 || cache.pre_activations.size() != layers)
    throw Error("backward: cache does not match model depth");
  const Index n = cache.activations.front().rows();
  if (dloss_dy.rows() != n || dloss_dy.cols() != model.output_dim())
    throw Error("backward: dloss_dy must be " + std::to_string(n) + " x " +
                std::to_string(model.output_dim()));

  grads.weights.resize(layers);
  grads.biases.resize(layers);
  workspace.delta.resize(layers);
  workspace.delta[layers - 1] = dloss_dy;
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& z = cache.pre_activations[l];
    if (z.rows() != n || z.cols() != model.layer_dims[l + 1])
      throw Error("backward: cache shape mismatch at layer " + std::to_string(l));
    Matrix& delta = workspace.delta[l];
    // ReLU subgradient at exactly 0 is taken as 0.
    if (model.activations[l] == Activation::ReLU)
      delta.array() *= (z.array() > 0.0).cast<double>();
    grads.weights[l].noalias() = cache.activations[l].transpose() * delta;
    grads.biases[l].noalias() = delta.colwise().sum().transpose();
    if (l > 0) workspace.delta[l - 1].noalias() = delta * model.weights[l].transpose();
  }
}

AdamState make_adam_state(const MlpModel& model, AdamOptions options) {
  AdamState state;
  state.options = options;
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    state.m_weights.push_back(Matrix::Zero(model.weights[l].rows(), model.weights[l].cols()));
    state.v_weights.push_back(state.m_weights.back());
    state.m_biases.push_back(Vector::Zero(model.biases[l].size()));
    state.v_biases.push_back(state.m_biases.back());
  }
  return state;
}

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state) {
  const std::size_t layers = model.num_layers();
  if (grads.weights.size() != layers || grads.biases.size() != layers ||
      state.m_weights.size() != layers || state.m_biases.size() != layers)
    throw Error("adam_step: layer count mismatch");
  for (std::size_t l = 0; l < layers; ++l) {
    if (grads.weights[l].rows() != model.weights[l].rows() ||
        grads.weights[l].cols() != model.weights[l].cols() ||
        grads.biases[l].size() != model.biases[l].size())
      throw Error("adam_step: gradient shape mismatch at layer " + std::to_string(l));
    if (!grads.weights[l].allFinite() || !grads.biases[l].allFinite())
      throw Error("adam_step: non-finite gradient in layer " + std::to_string(l));
  }

  const AdamOptions& o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(o.beta1, t);
  const double c2 = 1.0 - std::pow(o.beta2, t);
  auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
    m = o.beta1 * m + (1.0 - o.beta1) * g;
    v = o.beta2 * v + (1.0 - o.beta2) * g.cwiseProduct(g);
    param.array() -= o.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + o.eps);
  };
  for (std::size_t l = 0; l < layers; ++l) {
    update(model.weights[l], grads.weights[l], state.m_weights[l], state.v_weights[l]);
    update(model.biases[l], grads.biases[l], state.m_biases[l], state.v_biases[l]);
  }
}

std::string serialize_model(const MlpModel& model) {
  ByteWriter w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.layer_dims.size()));
  for (int d : model.layer_dims) w.u32(static_cast<std::uint32_t>(d));
  const std::size_t params_begin = w.size();
  for (std::size_t l = 0; l < model.num_layers(); ++l) {
    const Matrix& wl = model.weights[l];
    for (Index i = 0; i < wl.size(); ++i) w.f64(wl.data()[i]);
    for (Index i = 0; i < model.biases[l].size(); ++i) w.f64(model.biases[l][i]);
  }
  w.u64(w.byte_sum(params_begin));
  return w.str();
}

MlpModel deserialize_model(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw Error("model stream: bad magic (expected \"MSPT\")");
  ByteReader r(bytes);
  r.u32("magic");
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion)
    throw Error("model stream: unsupported format version " + std::to_string(version));
  const std::uint32_t count = r.u32("layer count");
  if (count < 3 || count > 1024) throw Error("model stream: invalid layer count " + std::to_string(count));
  std::vector<int> dims;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t d = r.u32("layer dims");
    if (d < 1 || d > kMaxDim) throw Error("model stream: invalid layer dim " + std::to_string(d));
    dims.push_back(static_cast<int>(d));
  }

  std::size_t expected = 0;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    expected += (static_cast<std::size_t>(dims[l]) + 1) * static_cast<std::size_t>(dims[l + 1]);
  if (r.remaining() < expected * 8 + 8) throw Error("model stream truncated: parameters missing");
  if (r.remaining() > expected * 8 + 8) throw Error("model stream: trailing bytes after checksum");

  MlpModel model;
  model.layer_dims = dims;
  const std::size_t params_begin = r.pos();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l], dims[l + 1]);
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = r.f64("weights");
    Vector b(dims[l + 1]);
    for (Index i = 0; i < b.size(); ++i) b[i] = r.f64("biases");
    if (!w.allFinite() || !b.allFinite())
      throw Error("model stream: non-finite parameter in layer " + std::to_string(l));
    model.weights.push_back(std::move(w));
    model.biases.push_back(std::move(b));
  }
  const std::uint64_t sum = r.byte_sum(params_begin, r.pos());
  if (r.u64("checksum") != sum) throw Error("model stream: checksum mismatch");
  model.activations = default_activations(model.weights.size());
  return model;
}

void save_model(const MlpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  const std::string bytes = serialize_model(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

MlpModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_model(bytes);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace msptsne
