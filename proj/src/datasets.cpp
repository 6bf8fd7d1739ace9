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

#include "msptsne/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <string_view>

namespace msptsne {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& value) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size() && !field.empty();
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

Dataset gen_helix(Index n, double noise_sd, std::uint64_t seed, HelixOptions options) {
  if (n < 8) throw Error("gen_helix: n must be >= 8, got " + std::to_string(n));
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) throw Error("gen_helix: noise sd must be >= 0");
  if (options.coils < 1) throw Error("gen_helix: coils must be >= 1");
  Dataset data;
  data.name = "helix";
  data.x.resize(n, 3);
  std::vector<long long> labels(static_cast<std::size_t>(n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    data.x(i, 0) = std::cos(two_pi * t);
    data.x(i, 1) = std::sin(two_pi * t);
    data.x(i, 2) = options.z_amplitude * std::cos(two_pi * options.coils * t);
    labels[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor(options.coils * t));
  }
  if (noise_sd > 0.0) {
    for (Index i = 0; i < data.x.size(); ++i) data.x.data()[i] += noise_sd * noise(rng);
  }
  data.labels = std::move(labels);
  return data;
}

Dataset load_csv(const std::string& path, CsvOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(path + ": cannot open file");
  Dataset data;
  data.name = std::filesystem::path(path).stem().string();
  std::vector<double> values;
  std::vector<long long> labels;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (options.skip_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    const Index arity = static_cast<Index>(fields.size());
    if (cols < 0) {
      cols = arity;
      if (options.has_labels && cols < 2)
        throw Error(path + ":" + std::to_string(line_no) + ": need at least one feature and a label");
    } else if (arity != cols) {
      throw Error(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                  " fields, found " + std::to_string(arity));
    }
    const Index features = options.has_labels ? cols - 1 : cols;
    for (Index c = 0; c < features; ++c) {
      double v = 0.0;
      const auto field = fields[static_cast<std::size_t>(c)];
      if (!parse_number(field, v) || !std::isfinite(v))
        throw Error(path + ":" + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                    ": not a finite number: '" + std::string(field) + "'");
      values.push_back(v);
    }
    if (options.has_labels) {
      long long label = 0;
      const auto field = fields.back();
      if (!parse_number(field, label))
        throw Error(path + ":" + std::to_string(line_no) + ": label is not an integer: '" +
                    std::string(field) + "'");
      labels.push_back(label);
    }
    ++rows;
  }
  if (rows == 0) throw Error(path + ": no data rows");
  const Index features = options.has_labels ? cols - 1 : cols;
  data.x = Eigen::Map<const Matrix>(values.data(), rows, features);
  if (options.has_labels) data.labels = std::move(labels);
  return data;
}

void save_csv(const Matrix& x, const std::vector<long long>* labels, const std::string& path) {
  if (labels != nullptr && static_cast<Index>(labels->size()) != x.rows())
    throw Error("save_csv: label count does not match row count");
  std::string out;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j > 0) out.push_back(',');
      append_double(out, x(i, j));
    }
    if (labels != nullptr) {
      out.push_back(',');
      out += std::to_string((*labels)[static_cast<std::size_t>(i)]);
    }
    out.push_back('\n');
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(path + ": cannot open for writing");
  file << out;
  if (!file) throw Error(path + ": write failed");
}

Split train_test_split(Index n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw Error("train_test_split: test fraction must be in (0, 1)");
  const Index n_test = static_cast<Index>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test < 1) throw Error("train_test_split: test set would be empty");
  if (n - n_test < 8)
    throw Error("train_test_split: training set would have " + std::to_string(n - n_test) +
                " points, need >= 8");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Split split;
  split.seed = seed;
  split.test_indices.assign(perm.begin(), perm.begin() + n_test);
  split.train_indices.assign(perm.begin() + n_test, perm.end());
  std::sort(split.test_indices.begin(), split.test_indices.end());
  std::sort(split.train_indices.begin(), split.train_indices.end());
  return split;
}

Matrix select_rows(const Matrix& x, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= x.rows()) throw Error("select_rows: index out of range");
    out.row(static_cast<Index>(r)) = x.row(rows[r]);
  }
  return out;
}

std::vector<long long> select_labels(const std::vector<long long>& labels,
                                     const std::vector<Index>& rows) {
  std::vector<long long> out;
  out.reserve(rows.size());
  for (Index r : rows) out.push_back(labels.at(static_cast<std::size_t>(r)));
  return out;
}

void minmax_scale(Matrix& x) {
  for (Index j = 0; j < x.cols(); ++j) {
    const double lo = x.col(j).minCoeff();
    const double range = x.col(j).maxCoeff() - lo;
    if (range > 0.0)
      x.col(j) = (x.col(j).array() - lo) / range;
    else
      x.col(j).setZero();
  }
}

Dataset remove_duplicate_rows(const Dataset& data) {
  std::map<std::vector<double>, Index> seen;
  std::vector<Index> keep;
  for (Index i = 0; i < data.x.rows(); ++i) {
    std::vector<double> key(data.x.row(i).begin(), data.x.row(i).end());
    if (seen.emplace(std::move(key), i).second) keep.push_back(i);
  }
  Dataset out;
  out.name = data.name;
  out.x = select_rows(data.x, keep);
  if (data.labels) out.labels = select_labels(*data.labels, keep);
  return out;
}

void add_jitter(Matrix& x, double sd, std::uint64_t seed) {
  if (!(sd >= 0.0)) throw Error("add_jitter: sd must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] += noise(rng);
}

}  // namespace msptsne
