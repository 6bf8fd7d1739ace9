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
#include <string>
#include <vector>

#include "msptsne/datasets.hpp"
#include "msptsne/quality.hpp"
#include "msptsne/trainer.hpp"

namespace msptsne {

struct ExperimentOptions {
  /// Base training configuration; mode, perplexity and widths are overridden per method.
  TrainConfig train;
  std::vector<double> perplexities{8.0, 32.0, 128.0};
  double test_fraction = 0.3;
  /// Candidate hidden widths; empty means train.layer_widths only.
  std::vector<std::vector<int>> width_grid;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 1;
};

/// One fitted method evaluated in both scenarios.
struct MethodRecord {
  std::string label;  // "multiscale" or "perplexity-<value>"
  std::vector<int> widths;
  double final_loss = 0.0;
  QualityCurve train_curve;
  QualityCurve extended_curve;
  std::string train_curve_path;
  std::string extended_curve_path;
};

struct ExperimentReport {
  std::vector<MethodRecord> methods;
  std::uint64_t seed = 0;
  Index train_size = 0;
  Index test_size = 0;
};

/// Holds out a test split, fits every method on the training rows, and
/// evaluates the training embedding and the train-then-test union. All
/// artifacts go under options.out_dir.
ExperimentReport run_experiment(const Dataset& data, const ExperimentOptions& options);

/// Derived seeds; every random subsystem is keyed off the single --seed flag.
std::uint64_t split_seed(std::uint64_t seed);
std::uint64_t train_seed(std::uint64_t seed);
std::uint64_t jitter_seed(std::uint64_t seed);

std::string format_double(double v);
void write_curve_csv(const QualityCurve& curve, const std::string& path);

/// Entry point of the msptsne command-line tool. Returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace msptsne
