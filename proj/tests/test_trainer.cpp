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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "msptsne/datasets.hpp"
#include "oracles.hpp"

namespace msptsne {
namespace {

SimilarityMatrix random_joint(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  SimilarityMatrix p{Matrix::Zero(n, n), Normalization::GlobalSumOne};
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) p.s(i, j) = p.s(j, i) = u(rng);
  p.s /= p.s.sum();
  return p;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.layer_widths = {16, 16, 32, 16};
  cfg.epochs = 30;
  cfg.learning_rate = 1e-2;
  cfg.seed = 5;
  return cfg;
}

TEST(KlLoss, IdentityAndTwoPoints) {
  const SimilarityMatrix p = random_joint(6, 1);
  EXPECT_NEAR(kl_loss(p, p), 0.0, 1e-12);
  SimilarityMatrix two{Matrix::Zero(2, 2), Normalization::GlobalSumOne};
  two.s(0, 1) = two.s(1, 0) = 0.5;
  Matrix y(2, 2);
  y << 0, 0, 4, 1;
  EXPECT_NEAR(kl_loss(two, ld_similarities_student(y)), 0.0, 1e-15);
}

TEST(KlLoss, MatchesDirectSummation) {
  const SimilarityMatrix p = random_joint(5, 2);
  const SimilarityMatrix q = random_joint(5, 3);
  EXPECT_NEAR(kl_loss(p, q), oracle::kl(p.s, q.s), 1e-12);
  EXPECT_GT(kl_loss(p, q), 0.0);
}

TEST(KlLoss, SizeMismatch) {
  EXPECT_THROW(kl_loss(random_joint(4, 1), random_joint(5, 1)), Error);
}

TEST(KlGrad, ZeroWhenDistributionsMatch) {
  const Matrix y = oracle::random_matrix(7, 2, 4);
  const SimilarityMatrix q = ld_similarities_student(y);
  EXPECT_LT(kl_grad_embedding(q, q, y).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(KlGrad, ForcesCancel) {
  const Matrix y = oracle::random_matrix(9, 3, 5);
  const SimilarityMatrix p = random_joint(9, 6);
  const Matrix g = kl_grad_embedding(p, ld_similarities_student(y), y);
  EXPECT_LT(g.colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(KlGrad, MatchesFiniteDifferencesOfLoss) {
  for (Index n : {2, 3, 4, 6, 8}) {
    for (Index dim : {1, 2, 3}) {
      const std::uint64_t seed = static_cast<std::uint64_t>(10 * n + dim);
      Matrix y = oracle::random_matrix(n, dim, seed);
      const SimilarityMatrix p = random_joint(n, seed + 1);
      const Matrix g = kl_grad_embedding(p, ld_similarities_student(y), y);
      auto loss = [&] { return oracle::kl(p.s, oracle::student_t(y)); };
      for (Index i = 0; i < n; ++i)
        for (Index d = 0; d < dim; ++d) {
          const double fd = oracle::central_difference(loss, y(i, d), 1e-6);
          EXPECT_LT(oracle::relative_error(g(i, d), fd), 1e-5)
              << "n=" << n << " P=" << dim << " (" << i << "," << d << ")";
        }
    }
  }
}

TEST(EndToEnd, ParameterGradientsMatchFiniteDifferences) {
  const Matrix x = oracle::random_matrix(8, 4, 31);
  const SimilarityMatrix p = random_joint(8, 32);
  MlpModel m = init_mlp({4, 6, 6, 2}, 33);
  const BatchLoss b = batch_loss_and_gradients(m, x, p);
  ForwardCache cache;
  forward(m, x, &cache);
  auto loss = [&] { return oracle::kl(p.s, oracle::student_t(oracle::mlp_forward(m.weights, m.biases, x))); };
  EXPECT_NEAR(b.loss, loss(), 1e-12);
  int checked = 0;
  for (std::size_t l = 0; l < m.num_layers(); ++l) {
    for (Index i = 0; i < m.weights[l].rows(); ++i)
      for (Index j = 0; j < m.weights[l].cols(); ++j) {
        if (l + 1 < m.num_layers() && (cache.pre_activations[l].col(j).array().abs() < 1e-5).any())
          continue;
        const double fd = oracle::central_difference(loss, m.weights[l](i, j), 1e-6);
        EXPECT_LT(oracle::relative_error(b.grads.weights[l](i, j), fd), 1e-4);
        ++checked;
      }
  }
  EXPECT_GT(checked, 40);
}

TEST(Config, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.mode = SimilarityMode::Fixed;
  cfg.perplexity = 30.0;
  EXPECT_NO_THROW(validate(cfg));
  cfg.batch_size = 30;
  EXPECT_THROW(validate(cfg), Error);
  cfg.batch_size = 1000;
  cfg.perplexity = 1.0;
  EXPECT_THROW(validate(cfg), Error);
  cfg = TrainConfig{};
  cfg.epochs = 0;
  EXPECT_THROW(validate(cfg), Error);
  cfg = TrainConfig{};
  cfg.batch_size = 8;
  EXPECT_THROW(validate(cfg), Error);
}

TEST(Config, BatchSizes) {
  TrainConfig cfg;
  EXPECT_EQ(batch_sizes(1440, cfg), (std::vector<Index>{1440}));
  EXPECT_EQ(batch_sizes(2048, cfg), (std::vector<Index>{2048}));
  const auto sizes = batch_sizes(2500, cfg);
  EXPECT_EQ(sizes, (std::vector<Index>{834, 833, 833}));
}

TEST(Fit, FixedPerplexityTooLargeForData) {
  TrainConfig cfg = small_config();
  cfg.mode = SimilarityMode::Fixed;
  cfg.perplexity = 20.0;
  EXPECT_THROW(fit(gen_helix(20, 0.0, 0).x, cfg), Error);
}

TEST(Fit, DuplicateRowsAdviseJitter) {
  Matrix x = oracle::random_matrix(12, 3, 1);
  x.row(4) = x.row(7);
  x.row(5) = x.row(7);
  x.setZero();
  try {
    fit(x, small_config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("jitter"), std::string::npos) << e.what();
  }
}

TEST(Fit, DeterministicForFixedSeed) {
  const Matrix x = gen_helix(64, 0.05, 3).x;
  const FitResult a = fit(x, small_config());
  const FitResult b = fit(x, small_config());
  EXPECT_EQ(a.log.epoch_loss, b.log.epoch_loss);
  EXPECT_EQ(a.log.final_loss, b.log.final_loss);
  EXPECT_TRUE(a.model == b.model);
  for (double l : a.log.epoch_loss) EXPECT_TRUE(std::isfinite(l));
  EXPECT_EQ(a.log.epoch_loss.size(), 30u);
}

TEST(Fit, FixedModeTrains) {
  TrainConfig cfg = small_config();
  cfg.mode = SimilarityMode::Fixed;
  cfg.perplexity = 10.0;
  const FitResult r = fit(gen_helix(80, 0.05, 1).x, cfg);
  EXPECT_LT(r.log.final_loss, r.log.epoch_loss.front());
}

TEST(Fit, MiniBatchPath) {
  TrainConfig cfg = small_config();
  cfg.full_batch_threshold = 50;
  cfg.batch_size = 32;
  cfg.epochs = 10;
  const Matrix x = gen_helix(100, 0.05, 2).x;
  const FitResult a = fit(x, cfg);
  const FitResult b = fit(x, cfg);
  EXPECT_EQ(a.log.epoch_loss, b.log.epoch_loss);
  EXPECT_LT(a.log.final_loss, a.log.epoch_loss.front());
}

TEST(Fit, PermutationInvariantUnderFullBatch) {
  const Matrix x = gen_helix(48, 0.05, 4).x;
  std::vector<Index> perm(48);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
  const Matrix permuted = select_rows(x, perm);
  TrainConfig cfg = small_config();
  cfg.epochs = 20;
  const FitResult a = fit(x, cfg);
  const FitResult b = fit(permuted, cfg);
  EXPECT_NEAR(a.log.final_loss, b.log.final_loss, 1e-9);
  EXPECT_LT((select_rows(a.embedding, perm) - b.embedding).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Transform, PerRowPurityAndConsistency) {
  const Dataset d = gen_helix(90, 0.05, 6);
  const Split split = train_test_split(90, 0.3, 1);
  const Matrix train = select_rows(d.x, split.train_indices);
  const Matrix test = select_rows(d.x, split.test_indices);
  const FitResult r = fit(train, small_config());

  Matrix both(90, 3);
  both << train, test;
  const Matrix joint = transform(r.model, both);
  const Matrix a = transform(r.model, train);
  const Matrix b = transform(r.model, test);
  EXPECT_TRUE(joint.topRows(train.rows()) == a);
  EXPECT_TRUE(joint.bottomRows(test.rows()) == b);
  EXPECT_TRUE(transform(r.model, train) == a);
  EXPECT_LT((a - r.embedding).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(a.cols(), 2);
  EXPECT_THROW(transform(r.model, Matrix::Zero(3, 4)), Error);
}

TEST(Fit, HelixDefaultConfigLossDrops) {
  // Default widths and epochs on a 256-point helix.
  TrainConfig cfg;
  const FitResult r = fit(gen_helix(256, 0.05, 0).x, cfg);
  const double first = r.log.epoch_loss.front();
  const double last = r.log.epoch_loss.back();
  EXPECT_LT(last, first);
  EXPECT_LE(last, 0.8 * first);
}

}  // namespace
}  // namespace msptsne
