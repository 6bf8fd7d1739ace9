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

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace msptsne {
namespace {

MlpModel randomized(const std::vector<int>& dims, std::uint64_t seed) {
  MlpModel m = init_mlp(dims, seed);
  std::mt19937_64 rng(seed + 99);
  std::normal_distribution<double> n(0.0, 0.3);
  for (auto& b : m.biases)
    for (Index i = 0; i < b.size(); ++i) b[i] = n(rng);
  return m;
}

TEST(InitMlp, DeterministicAndSeedSensitive) {
  const MlpModel a = init_mlp({3, 4, 2}, 42);
  const MlpModel b = init_mlp({3, 4, 2}, 42);
  const MlpModel c = init_mlp({3, 4, 2}, 43);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  ASSERT_EQ(a.weights.size(), 2u);
  EXPECT_EQ(a.weights[0].rows(), 3);
  EXPECT_EQ(a.weights[0].cols(), 4);
  EXPECT_EQ(a.weights[1].rows(), 4);
  EXPECT_EQ(a.weights[1].cols(), 2);
  EXPECT_EQ(a.biases[0].size(), 4);
  EXPECT_EQ(a.biases[1].size(), 2);
  EXPECT_TRUE(a.biases[0].isZero(0.0));
  EXPECT_EQ(a.activations, (std::vector<Activation>{Activation::ReLU, Activation::Identity}));
}

TEST(InitMlp, HeUniformBounds) {
  const MlpModel m = init_mlp({50, 200, 2}, 1);
  const double bound0 = std::sqrt(6.0 / 50.0);
  EXPECT_LE(m.weights[0].cwiseAbs().maxCoeff(), bound0);
  EXPECT_GT(m.weights[0].cwiseAbs().maxCoeff(), 0.9 * bound0);
  EXPECT_LE(m.weights[1].cwiseAbs().maxCoeff(), std::sqrt(6.0 / 200.0));
}

TEST(InitMlp, RejectsInvalidDims) {
  EXPECT_THROW(init_mlp({3, 2}, 0), Error);
  EXPECT_THROW(init_mlp({3, 0, 2}, 0), Error);
}

TEST(Forward, ZeroModelGivesZeros) {
  MlpModel m = init_mlp({3, 5, 2}, 0);
  for (auto& w : m.weights) w.setZero();
  const Matrix y = forward(m, oracle::random_matrix(4, 3, 1));
  EXPECT_TRUE(y.isZero(0.0));
}

TEST(Forward, ReluKillsNegatives) {
  MlpModel m = init_mlp({1, 1, 1}, 0);
  m.weights[0](0, 0) = 1.0;
  m.weights[1](0, 0) = 2.0;
  m.biases[1][0] = 0.25;
  Matrix x(1, 1);
  x << -5.0;
  ForwardCache cache;
  const Matrix y = forward(m, x, &cache);
  EXPECT_EQ(cache.pre_activations[0](0, 0), -5.0);
  EXPECT_EQ(cache.activations[1](0, 0), 0.0);
  EXPECT_EQ(y(0, 0), 0.25);
}

TEST(Forward, MatchesStraightLineOracle) {
  const MlpModel m = randomized({5, 7, 6, 3}, 3);
  const Matrix x = oracle::random_matrix(9, 5, 4);
  const Matrix y = forward(m, x);
  EXPECT_LT((y - oracle::mlp_forward(m.weights, m.biases, x)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Forward, WideLayersMatchOracle) {
  // Widths that exercise the wide, single-packet and scalar column paths.
  const MlpModel m = randomized({37, 75, 41, 2}, 5);
  const Matrix x = oracle::random_matrix(13, 37, 6);
  EXPECT_LT((forward(m, x) - oracle::mlp_forward(m.weights, m.biases, x)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(Forward, RowsIndependentOfBatchComposition) {
  const MlpModel m = randomized({6, 70, 33, 2}, 8);
  const Matrix x = oracle::random_matrix(23, 6, 9);
  const Matrix full = forward(m, x);
  EXPECT_TRUE(forward(m, x) == full);
  for (Index split : {1, 3, 4, 10, 22}) {
    const Matrix top = forward(m, x.topRows(split));
    const Matrix bottom = forward(m, x.bottomRows(23 - split));
    EXPECT_TRUE(top == full.topRows(split)) << split;
    EXPECT_TRUE(bottom == full.bottomRows(23 - split)) << split;
  }
  for (Index i = 0; i < 23; ++i) EXPECT_TRUE(forward(m, x.row(i)) == full.row(i));
}

TEST(Forward, DimensionMismatch) {
  const MlpModel m = init_mlp({3, 4, 2}, 0);
  EXPECT_THROW(forward(m, Matrix::Zero(2, 4)), Error);
}

TEST(Backward, ZeroUpstreamGivesZeroGradients) {
  const MlpModel m = randomized({3, 4, 4, 2}, 1);
  ForwardCache cache;
  forward(m, oracle::random_matrix(5, 3, 2), &cache);
  const Gradients g = backward(m, cache, Matrix::Zero(5, 2));
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    EXPECT_TRUE(g.weights[l].isZero(0.0));
    EXPECT_TRUE(g.biases[l].isZero(0.0));
  }
}

TEST(Backward, ScalarChainRule) {
  // y = 1 * relu(w x) with w, x > 0, so dy/dw = x.
  MlpModel m = init_mlp({1, 1, 1}, 0);
  m.weights[0](0, 0) = 0.8;
  m.weights[1](0, 0) = 1.0;
  Matrix x(1, 1);
  x << 2.5;
  ForwardCache cache;
  forward(m, x, &cache);
  Matrix g(1, 1);
  g << -1.75;
  const Gradients grads = backward(m, cache, g);
  EXPECT_DOUBLE_EQ(grads.weights[0](0, 0), -1.75 * 2.5);
  EXPECT_DOUBLE_EQ(grads.biases[0][0], -1.75);
  EXPECT_DOUBLE_EQ(grads.weights[1](0, 0), -1.75 * 0.8 * 2.5);
}

TEST(Backward, MatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    MlpModel m = randomized({5, 7, 7, 3}, seed);
    const Matrix x = oracle::random_matrix(6, 5, seed + 10);
    const Matrix c = oracle::random_matrix(6, 3, seed + 20);
    // L = sum(c .* y) + 0.5 * sum(y .^ 2)  =>  dL/dy = c + y
    auto loss = [&] {
      const Matrix y = forward(m, x);
      return (c.array() * y.array()).sum() + 0.5 * y.squaredNorm();
    };
    ForwardCache cache;
    const Matrix y = forward(m, x, &cache);
    const Gradients g = backward(m, cache, c + y);
    // Skip parameters feeding a unit whose pre-activation sits at a kink.
    auto near_kink = [&](std::size_t layer, Index unit) {
      if (m.activations[layer] != Activation::ReLU) return false;
      return (cache.pre_activations[layer].col(unit).array().abs() < 1e-5).any();
    };
    for (std::size_t l = 0; l < m.num_layers(); ++l) {
      for (Index i = 0; i < m.weights[l].rows(); ++i)
        for (Index j = 0; j < m.weights[l].cols(); ++j) {
          if (near_kink(l, j)) continue;
          const double fd = oracle::central_difference(loss, m.weights[l](i, j), 1e-6);
          EXPECT_LT(oracle::relative_error(g.weights[l](i, j), fd), 1e-4)
              << "layer " << l << " w(" << i << "," << j << ")";
        }
      for (Index j = 0; j < m.biases[l].size(); ++j) {
        if (near_kink(l, j)) continue;
        const double fd = oracle::central_difference(loss, m.biases[l][j], 1e-6);
        EXPECT_LT(oracle::relative_error(g.biases[l][j], fd), 1e-4) << "layer " << l << " b" << j;
      }
    }
  }
}

TEST(Backward, ShapeMismatch) {
  const MlpModel m = init_mlp({3, 4, 2}, 0);
  ForwardCache cache;
  forward(m, Matrix::Ones(5, 3), &cache);
  EXPECT_THROW(backward(m, cache, Matrix::Zero(4, 2)), Error);
  EXPECT_THROW(backward(m, ForwardCache{}, Matrix::Zero(5, 2)), Error);
}

TEST(Adam, ZeroGradientsLeaveParameters) {
  MlpModel m = randomized({3, 4, 2}, 2);
  const MlpModel before = m;
  AdamState state = make_adam_state(m);
  Gradients g;
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    g.weights.push_back(Matrix::Zero(m.weights[l].rows(), m.weights[l].cols()));
    g.biases.push_back(Vector::Zero(m.biases[l].size()));
  }
  adam_step(m, g, state);
  EXPECT_TRUE(m == before);
  EXPECT_EQ(state.step, 1);
}

// Single-parameter network so the Adam trajectory can be checked by hand.
struct ScalarProblem {
  MlpModel model = init_mlp({1, 1, 1}, 0);
  Gradients grads;
  ScalarProblem() {
    grads.weights = {Matrix::Zero(1, 1), Matrix::Zero(1, 1)};
    grads.biases = {Vector::Zero(1), Vector::Zero(1)};
  }
  double& param() { return model.biases[1][0]; }
};

TEST(Adam, FirstStepMovesByLearningRate) {
  for (double g : {3.0, -0.002}) {
    ScalarProblem p;
    p.param() = 1.0;
    AdamState state = make_adam_state(p.model);
    p.grads.biases[1][0] = g;
    adam_step(p.model, p.grads, state);
    EXPECT_NEAR(p.param() - 1.0, -1e-3 * (g > 0 ? 1.0 : -1.0), 1e-8);
  }
}

TEST(Adam, ThreeStepQuadraticMatchesOracle) {
  // f(w) = (w - 2)^2, gradient 2 (w - 2).
  AdamOptions opts;
  opts.learning_rate = 0.1;
  ScalarProblem p;
  p.param() = 0.5;
  AdamState state = make_adam_state(p.model, opts);

  double w = 0.5, m = 0.0, v = 0.0;
  for (int t = 1; t <= 3; ++t) {
    const double g = 2.0 * (w - 2.0);
    m = 0.9 * m + 0.1 * g;
    v = 0.999 * v + 0.001 * g * g;
    const double mhat = m / (1.0 - std::pow(0.9, t));
    const double vhat = v / (1.0 - std::pow(0.999, t));
    w -= 0.1 * mhat / (std::sqrt(vhat) + 1e-8);

    p.grads.biases[1][0] = 2.0 * (p.param() - 2.0);
    adam_step(p.model, p.grads, state);
    EXPECT_NEAR(p.param(), w, 1e-12) << "step " << t;
  }
  EXPECT_EQ(state.step, 3);
}

TEST(Adam, NonFiniteGradientNamesLayer) {
  MlpModel m = init_mlp({2, 3, 3, 1}, 0);
  AdamState state = make_adam_state(m);
  Gradients g;
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    g.weights.push_back(Matrix::Zero(m.weights[l].rows(), m.weights[l].cols()));
    g.biases.push_back(Vector::Zero(m.biases[l].size()));
  }
  g.weights[1](0, 0) = std::numeric_limits<double>::infinity();
  try {
    adam_step(m, g, state);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("layer 1"), std::string::npos);
  }
  EXPECT_EQ(state.step, 0);
}

TEST(Serialization, RoundTripIsBitwise) {
  const MlpModel m = randomized({4, 9, 5, 2}, 12);
  const MlpModel back = deserialize_model(serialize_model(m));
  EXPECT_TRUE(back == m);
  const Matrix x = oracle::random_matrix(7, 4, 1);
  EXPECT_TRUE(forward(back, x) == forward(m, x));
}

TEST(Serialization, FixedLittleEndianLayout) {
  MlpModel m = init_mlp({1, 1, 1}, 0);
  m.weights[0](0, 0) = 1.0;
  m.weights[1](0, 0) = -2.0;
  m.biases[0][0] = 0.5;
  m.biases[1][0] = 0.0;
  const std::string bytes = serialize_model(m);
  const unsigned char expected_head[] = {'M', 'S', 'P', 'T', 1, 0, 0, 0, 3, 0, 0, 0,
                                         1,   0,   0,   0,   1, 0, 0, 0, 1, 0, 0, 0};
  ASSERT_EQ(bytes.size(), sizeof(expected_head) + 4 * 8 + 8);
  for (std::size_t i = 0; i < sizeof(expected_head); ++i)
    EXPECT_EQ(static_cast<unsigned char>(bytes[i]), expected_head[i]) << i;
  // 1.0 = 0x3FF0000000000000, stored little-endian.
  const unsigned char one[] = {0, 0, 0, 0, 0, 0, 0xF0, 0x3F};
  for (std::size_t i = 0; i < 8; ++i)
    EXPECT_EQ(static_cast<unsigned char>(bytes[sizeof(expected_head) + i]), one[i]);
  // Checksum: byte sum of 1.0, 0.5 (3FE0...), -2.0 (C000...), 0.0.
  const std::uint64_t checksum = 0xF0 + 0x3F + 0xE0 + 0x3F + 0xC0;
  std::uint64_t stored = 0;
  for (int i = 0; i < 8; ++i)
    stored |= std::uint64_t{static_cast<unsigned char>(bytes[bytes.size() - 8 + i])} << (8 * i);
  EXPECT_EQ(stored, checksum);
}

TEST(Serialization, RejectsCorruptStreams) {
  const std::string good = serialize_model(randomized({3, 4, 2}, 1));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(deserialize_model(bad_magic), Error);
  std::string bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(deserialize_model(bad_version), Error);
  EXPECT_THROW(deserialize_model(good.substr(0, good.size() - 3)), Error);
  EXPECT_THROW(deserialize_model(good.substr(0, 10)), Error);
  EXPECT_THROW(deserialize_model(good + "x"), Error);
  std::string flipped = good;
  flipped[40] ^= 0x01;
  EXPECT_THROW(deserialize_model(flipped), Error);
  EXPECT_THROW(deserialize_model(""), Error);
}

TEST(Serialization, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "msptsne_model_test.mspt";
  const MlpModel m = randomized({3, 6, 2}, 4);
  save_model(m, path.string());
  EXPECT_TRUE(load_model(path.string()) == m);
  std::filesystem::remove(path);
  EXPECT_THROW(load_model(path.string()), Error);
}

}  // namespace
}  // namespace msptsne
