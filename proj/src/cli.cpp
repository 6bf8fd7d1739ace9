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

#include "msptsne/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace msptsne {
namespace fs = std::filesystem;
namespace {

constexpr std::uint64_t kSplitSeedOffset = 101;
constexpr std::uint64_t kTrainSeedOffset = 202;
constexpr std::uint64_t kJitterSeedOffset = 303;

// Removes every registered path on destruction unless commit() was called.
class OutputGuard {
 public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = paths_.rbegin(); it != paths_.rend(); ++it) fs::remove(*it, ec);
  }
  void add(const fs::path& p) {
    std::lock_guard lock(mutex_);
    paths_.push_back(p);
  }
  // Creates the directory (and missing parents), registering the new ones.
  void make_dirs(const fs::path& dir) {
    std::vector<fs::path> created;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      created.push_back(p);
      if (p == p.parent_path()) break;
    }
    fs::create_directories(dir);
    for (auto it = created.rbegin(); it != created.rend(); ++it) add(*it);
  }
  void commit() { committed_ = true; }

 private:
  std::mutex mutex_;
  std::vector<fs::path> paths_;
  bool committed_ = false;
};

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    std::string part = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    parts.push_back(part);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<int> parse_widths(const std::string& s) {
  std::vector<int> widths;
  for (const std::string& part : split_list(s, ',')) {
    int w = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), w);
    if (ec != std::errc() || ptr != part.data() + part.size() || w < 1)
      throw Error("invalid layer width '" + part + "' in '" + s + "'");
    widths.push_back(w);
  }
  return widths;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> values;
  for (const std::string& part : split_list(s, ',')) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size())
      throw Error("invalid number '" + part + "' in '" + s + "'");
    values.push_back(v);
  }
  return values;
}

std::string method_label(const TrainConfig& cfg) {
  if (cfg.mode == SimilarityMode::Multiscale) return "multiscale";
  const double v = cfg.perplexity;
  if (v == std::floor(v) && v < 1e15) return "perplexity-" + std::to_string(static_cast<long long>(v));
  return "perplexity-" + format_double(v);
}

std::string widths_string(const std::vector<int>& widths) {
  std::string s;
  for (std::size_t i = 0; i < widths.size(); ++i) s += (i ? "," : "") + std::to_string(widths[i]);
  return s;
}

void write_text(const std::string& text, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(path.string() + ": write failed");
}

void write_loss_csv(const TrainLog& log, const fs::path& path) {
  std::string text = "epoch,loss\n";
  for (std::size_t e = 0; e < log.epoch_loss.size(); ++e)
    text += std::to_string(e + 1) + "," + format_double(log.epoch_loss[e]) + "\n";
  write_text(text, path);
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MSPTSNE_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v > 0) cap = v;
  }
  return cap;
}

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

struct Preprocess {
  bool dedup = false;
  double jitter = 0.0;
  bool minmax = false;
};

Dataset load_input(const std::string& path, const CsvOptions& csv, const Preprocess& pre,
                   std::uint64_t seed) {
  Dataset data = load_csv(path, csv);
  if (pre.dedup) {
    const Index before = data.size();
    data = remove_duplicate_rows(data);
    if (data.size() != before)
      std::clog << "removed " << before - data.size() << " duplicate rows\n";
  }
  if (pre.jitter > 0.0) add_jitter(data.x, pre.jitter, jitter_seed(seed));
  if (pre.minmax) minmax_scale(data.x);
  return data;
}

void add_csv_flags(CLI::App* cmd, CsvOptions& csv) {
  cmd->add_flag("--labels", csv.has_labels, "Last CSV column holds integer labels");
  cmd->add_flag("--skip-header", csv.skip_header, "Skip the first CSV line");
}

void add_preprocess_flags(CLI::App* cmd, Preprocess& pre) {
  cmd->add_flag("--dedup", pre.dedup, "Drop exact duplicate rows before training");
  cmd->add_option("--jitter", pre.jitter, "Add Gaussian noise with this standard deviation")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--minmax", pre.minmax, "Scale every feature to [0, 1]");
}

struct FitFlags {
  std::string mode = "multiscale";
  double perplexity = 30.0;
  std::string layers = "500,500,2000,500";
  int log_every = 0;
};

void add_train_flags(CLI::App* cmd, TrainConfig& cfg, FitFlags& flags) {
  cmd->add_option("--mode", flags.mode, "Similarity mode")
      ->check(CLI::IsMember({"multiscale", "fixed"}));
  cmd->add_option("--perplexity", flags.perplexity, "Perplexity for --mode fixed");
  cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--layers", flags.layers, "Hidden widths, comma separated")->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size, "Mini-batch size for large data")
      ->capture_default_str();
  cmd->add_option("--log-every", flags.log_every, "Print the loss every N epochs (0 = quiet)");
}

void finish_train_config(CLI::App* cmd, TrainConfig& cfg, const FitFlags& flags) {
  const bool perplexity_given = cmd->count("--perplexity") > 0;
  const bool mode_given = cmd->count("--mode") > 0;
  if (flags.mode == "fixed" || (perplexity_given && !mode_given)) {
    cfg.mode = SimilarityMode::Fixed;
  } else if (perplexity_given) {
    throw Error("--perplexity only applies to --mode fixed");
  }
  cfg.perplexity = flags.perplexity;
  cfg.layer_widths = parse_widths(flags.layers);
  cfg.log_every = flags.log_every;
  validate(cfg);
}

int cmd_gen(Index n, double noise, int coils, std::uint64_t seed, bool labels,
            const std::string& out) {
  HelixOptions opts;
  opts.coils = coils;
  const Dataset data = gen_helix(n, noise, seed, opts);
  OutputGuard guard;
  guard.add(out);
  save_csv(data.x, labels ? &*data.labels : nullptr, out);
  guard.commit();
  std::cout << "N=" << data.x.rows() << " M=" << data.x.cols() << "\n";
  return 0;
}

int cmd_fit(const std::string& data_path, const CsvOptions& csv, const Preprocess& pre,
            TrainConfig cfg, std::uint64_t seed, const std::string& out, std::string log_path) {
  cfg.seed = train_seed(seed);
  const Dataset data = load_input(data_path, csv, pre, seed);
  if (log_path.empty()) log_path = out + ".log.csv";
  OutputGuard guard;
  const FitResult result = fit(data.x, cfg);
  guard.add(out);
  save_model(result.model, out);
  guard.add(log_path);
  write_loss_csv(result.log, log_path);
  guard.commit();
  std::cout << "N=" << data.x.rows() << " M=" << data.x.cols()
            << " first_loss=" << format_double(result.log.epoch_loss.front())
            << " final_loss=" << format_double(result.log.final_loss) << "\n";
  return 0;
}

int cmd_transform(const std::string& model_path, const std::string& data_path,
                  const CsvOptions& csv, const std::string& out) {
  const MlpModel model = load_model(model_path);
  const Dataset data = load_csv(data_path, csv);
  if (data.x.cols() != model.input_dim())
    throw Error(data_path + ": has " + std::to_string(data.x.cols()) +
                " feature columns, model expects M = " + std::to_string(model.input_dim()));
  const Matrix y = transform(model, data.x);
  OutputGuard guard;
  guard.add(out);
  save_csv(y, data.labels ? &*data.labels : nullptr, out);
  guard.commit();
  std::cout << "N=" << y.rows() << " P=" << y.cols() << "\n";
  return 0;
}

int cmd_evaluate(const std::string& hd_path, const CsvOptions& hd_csv, const std::string& ld_path,
                 const CsvOptions& ld_csv, const std::string& out) {
  const Dataset hd = load_csv(hd_path, hd_csv);
  const Dataset ld = load_csv(ld_path, ld_csv);
  if (hd.size() != ld.size())
    throw Error("size mismatch: " + hd_path + " has " + std::to_string(hd.size()) + " rows, " +
                ld_path + " has " + std::to_string(ld.size()));
  const QualityCurve curve = evaluate_embedding(hd.x, ld.x);
  if (!out.empty()) {
    OutputGuard guard;
    guard.add(out);
    write_curve_csv(curve, out);
    guard.commit();
  }
  std::cout << "auc=" << format_double(curve.auc) << "\n";
  return 0;
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed) { return seed + kSplitSeedOffset; }
std::uint64_t train_seed(std::uint64_t seed) { return seed + kTrainSeedOffset; }
std::uint64_t jitter_seed(std::uint64_t seed) { return seed + kJitterSeedOffset; }

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (std::isfinite(v) && s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

void write_curve_csv(const QualityCurve& curve, const std::string& path) {
  std::string text = "# auc=" + format_double(curve.auc) + "\nK,qnx,rnx\n";
  for (std::size_t k = 0; k < curve.qnx.size(); ++k)
    text += std::to_string(k + 1) + "," + format_double(curve.qnx[k]) + "," +
            format_double(curve.rnx[k]) + "\n";
  write_text(text, path);
}

ExperimentReport run_experiment(const Dataset& data, const ExperimentOptions& options) {
  if (options.out_dir.empty()) throw Error("experiment: output directory required");
  validate(options.train);
  const Split split = train_test_split(data.size(), options.test_fraction, split_seed(options.seed));
  const Matrix x_train = select_rows(data.x, split.train_indices);
  const Matrix x_test = select_rows(data.x, split.test_indices);
  // Extended scenario: training rows first, then the projected test rows.
  const Matrix x_extended = stack_rows(x_train, x_test);

  std::vector<TrainConfig> methods;
  {
    TrainConfig cfg = options.train;
    cfg.seed = train_seed(options.seed);
    cfg.mode = SimilarityMode::Multiscale;
    methods.push_back(cfg);
    for (double p : options.perplexities) {
      cfg.mode = SimilarityMode::Fixed;
      cfg.perplexity = p;
      validate(cfg);
      methods.push_back(cfg);
    }
  }
  std::vector<std::vector<int>> grid = options.width_grid;
  if (grid.empty()) grid.push_back(options.train.layer_widths);

  const fs::path root(options.out_dir);
  OutputGuard guard;
  guard.make_dirs(root);
  for (const char* sub : {"curves", "models", "embeddings", "logs", "data"})
    guard.make_dirs(root / sub);

  std::vector<long long> ext_labels;
  const std::vector<long long>* ext_labels_ptr = nullptr;
  std::vector<long long> train_labels;
  if (data.labels) {
    train_labels = select_labels(*data.labels, split.train_indices);
    ext_labels = train_labels;
    const auto test_labels = select_labels(*data.labels, split.test_indices);
    ext_labels.insert(ext_labels.end(), test_labels.begin(), test_labels.end());
    ext_labels_ptr = &ext_labels;
  }
  const std::vector<long long>* train_labels_ptr = data.labels ? &train_labels : nullptr;
  guard.add(root / "data" / "train.csv");
  save_csv(x_train, train_labels_ptr, (root / "data" / "train.csv").string());
  guard.add(root / "data" / "extended.csv");
  save_csv(x_extended, ext_labels_ptr, (root / "data" / "extended.csv").string());

  auto run_method = [&](const TrainConfig& base) {
    const std::string label = method_label(base);
    try {
      MethodRecord record;
      record.label = label;
      FitResult best;
      double best_auc = -2.0;
      for (const auto& widths : grid) {
        TrainConfig cfg = base;
        cfg.layer_widths = widths;
        FitResult fitted = fit(x_train, cfg);
        QualityCurve curve = evaluate_embedding(x_train, fitted.embedding);
        if (grid.size() > 1)
          std::clog << label << " widths " << widths_string(widths) << " train auc "
                    << format_double(curve.auc) << '\n';
        if (curve.auc > best_auc) {
          best_auc = curve.auc;
          best = std::move(fitted);
          record.widths = widths;
          record.train_curve = std::move(curve);
        }
      }
      record.final_loss = best.log.final_loss;
      const Matrix y_extended = stack_rows(best.embedding, transform(best.model, x_test));
      record.extended_curve = evaluate_embedding(x_extended, y_extended);

      const fs::path model_path = root / "models" / (label + ".mspt");
      guard.add(model_path);
      save_model(best.model, model_path.string());
      const fs::path log_path = root / "logs" / (label + "_loss.csv");
      guard.add(log_path);
      write_loss_csv(best.log, log_path);
      const fs::path emb_train = root / "embeddings" / (label + "_train.csv");
      guard.add(emb_train);
      save_csv(best.embedding, train_labels_ptr, emb_train.string());
      const fs::path emb_ext = root / "embeddings" / (label + "_extended.csv");
      guard.add(emb_ext);
      save_csv(y_extended, ext_labels_ptr, emb_ext.string());
      record.train_curve_path = (root / "curves" / (label + "_train.csv")).string();
      guard.add(record.train_curve_path);
      write_curve_csv(record.train_curve, record.train_curve_path);
      record.extended_curve_path = (root / "curves" / (label + "_extended.csv")).string();
      guard.add(record.extended_curve_path);
      write_curve_csv(record.extended_curve, record.extended_curve_path);
      return record;
    } catch (const std::exception& e) {
      throw Error(label + ": " + e.what());
    }
  };

  ExperimentReport report;
  report.seed = options.seed;
  report.train_size = static_cast<Index>(split.train_indices.size());
  report.test_size = static_cast<Index>(split.test_indices.size());
  report.methods.resize(methods.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, methods.size()));
  if (workers == 1) {
    for (std::size_t m = 0; m < methods.size(); ++m) report.methods[m] = run_method(methods[m]);
  } else {
    std::size_t next = 0;
    std::mutex next_mutex;
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        while (true) {
          std::size_t m;
          {
            std::lock_guard lock(next_mutex);
            if (next >= methods.size()) return;
            m = next++;
          }
          report.methods[m] = run_method(methods[m]);
        }
      }));
    }
    for (auto& f : pool) f.get();
  }

  std::string summary = "method,scenario,n,auc,widths\n";
  for (const MethodRecord& r : report.methods) {
    summary += r.label + ",train," + std::to_string(r.train_curve.n) + "," +
               format_double(r.train_curve.auc) + ",\"" + widths_string(r.widths) + "\"\n";
    summary += r.label + ",extended," + std::to_string(r.extended_curve.n) + "," +
               format_double(r.extended_curve.auc) + ",\"" + widths_string(r.widths) + "\"\n";
  }
  guard.add(root / "summary.csv");
  write_text(summary, root / "summary.csv");

  nlohmann::ordered_json config;
  config["dataset"] = data.name;
  config["n"] = data.size();
  config["m"] = data.x.cols();
  config["seed"] = options.seed;
  config["split_seed"] = split_seed(options.seed);
  config["train_seed"] = train_seed(options.seed);
  config["test_fraction"] = options.test_fraction;
  config["train_size"] = report.train_size;
  config["test_size"] = report.test_size;
  config["perplexities"] = options.perplexities;
  config["width_grid"] = grid;
  config["epochs"] = options.train.epochs;
  config["learning_rate"] = options.train.learning_rate;
  config["batch_size"] = options.train.batch_size;
  config["full_batch_threshold"] = options.train.full_batch_threshold;
  config["output_dim"] = options.train.output_dim;
  guard.add(root / "config.json");
  write_text(config.dump(2) + "\n", root / "config.json");

  guard.commit();
  return report;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Multi-scale parametric t-SNE: fit, project and assess embeddings"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for every random choice")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Generate the closed helix data set");
  Index gen_n = 1000;
  double gen_noise = 0.05;
  int gen_coils = 10;
  bool gen_labels = false;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Number of points")->capture_default_str();
  gen->add_option("--noise", gen_noise, "Gaussian noise standard deviation")->capture_default_str();
  gen->add_option("--coils", gen_coils, "Number of coils")->capture_default_str();
  gen->add_flag("--labels", gen_labels, "Append the coil index as a label column");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", gen_out, "Output CSV")->required();

  // fit
  auto* fitc = app.add_subcommand("fit", "Train a parametric embedding");
  std::string fit_data, fit_out, fit_log;
  CsvOptions fit_csv;
  Preprocess fit_pre;
  TrainConfig fit_cfg;
  FitFlags fit_flags;
  fitc->add_option("--data", fit_data, "Input CSV")->required();
  add_csv_flags(fitc, fit_csv);
  add_preprocess_flags(fitc, fit_pre);
  add_train_flags(fitc, fit_cfg, fit_flags);
  fitc->add_option("--seed", seed, "Seed");
  fitc->add_option("--out", fit_out, "Output model file (MSPT format)")->required();
  fitc->add_option("--log", fit_log, "Training log CSV (default <out>.log.csv)");

  // transform
  auto* tr = app.add_subcommand("transform", "Project data with a trained model");
  std::string tr_model, tr_data, tr_out;
  CsvOptions tr_csv;
  tr->add_option("--model", tr_model, "Model file")->required();
  tr->add_option("--data", tr_data, "Input CSV")->required();
  add_csv_flags(tr, tr_csv);
  tr->add_option("--seed", seed, "Unused; accepted for uniformity");
  tr->add_option("--out", tr_out, "Output embedding CSV")->required();

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Q_NX / R_NX curves and AUC of an embedding");
  std::string ev_hd, ev_ld, ev_out;
  CsvOptions ev_hd_csv, ev_ld_csv;
  ev->add_option("--hd", ev_hd, "High-dimensional data CSV")->required();
  ev->add_option("--ld", ev_ld, "Embedding CSV")->required();
  ev->add_flag("--hd-labels", ev_hd_csv.has_labels, "HD file has a label column");
  ev->add_flag("--ld-labels", ev_ld_csv.has_labels, "LD file has a label column");
  ev->add_option("--seed", seed, "Unused; accepted for uniformity");
  ev->add_option("--out", ev_out, "Curve CSV (K,qnx,rnx)");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Holdout comparison of multi-scale and fixed perplexities");
  std::string ex_data, ex_out, ex_perplexities = "8,32,128", ex_grid;
  double ex_test_fraction = 0.3;
  CsvOptions ex_csv;
  Preprocess ex_pre;
  TrainConfig ex_cfg;
  FitFlags ex_flags;
  ex->add_option("--data", ex_data, "Input CSV")->required();
  add_csv_flags(ex, ex_csv);
  add_preprocess_flags(ex, ex_pre);
  ex->add_option("--epochs", ex_cfg.epochs, "Training epochs")->capture_default_str();
  ex->add_option("--lr", ex_cfg.learning_rate, "Adam learning rate")->capture_default_str();
  ex->add_option("--layers", ex_flags.layers, "Hidden widths when no grid is given")
      ->capture_default_str();
  ex->add_option("--batch-size", ex_cfg.batch_size, "Mini-batch size")->capture_default_str();
  ex->add_option("--log-every", ex_flags.log_every, "Print the loss every N epochs");
  ex->add_option("--perplexities", ex_perplexities, "Fixed perplexities to compare")
      ->capture_default_str();
  ex->add_option("--test-fraction", ex_test_fraction, "Held-out fraction")->capture_default_str();
  ex->add_option("--width-grid", ex_grid, "Candidate widths, e.g. '100,100,400,100;500,500,2000,500'");
  ex->add_option("--seed", seed, "Seed");
  ex->add_option("--out", ex_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) return cmd_gen(gen_n, gen_noise, gen_coils, seed, gen_labels, gen_out);
    if (*fitc) {
      finish_train_config(fitc, fit_cfg, fit_flags);
      return cmd_fit(fit_data, fit_csv, fit_pre, fit_cfg, seed, fit_out, fit_log);
    }
    if (*tr) return cmd_transform(tr_model, tr_data, tr_csv, tr_out);
    if (*ev) return cmd_evaluate(ev_hd, ev_hd_csv, ev_ld, ev_ld_csv, ev_out);
    if (*ex) {
      ExperimentOptions opts;
      opts.train = ex_cfg;
      opts.train.layer_widths = parse_widths(ex_flags.layers);
      opts.train.log_every = ex_flags.log_every;
      opts.perplexities = ex_perplexities.empty() ? std::vector<double>{} : parse_doubles(ex_perplexities);
      opts.test_fraction = ex_test_fraction;
      if (!ex_grid.empty())
        for (const std::string& candidate : split_list(ex_grid, ';'))
          opts.width_grid.push_back(parse_widths(candidate));
      opts.seed = seed;
      opts.out_dir = ex_out;
      opts.threads = thread_cap();
      const Dataset data = load_input(ex_data, ex_csv, ex_pre, seed);
      const ExperimentReport report = run_experiment(data, opts);
      std::cout << "train=" << report.train_size << " test=" << report.test_size << "\n";
      for (const MethodRecord& r : report.methods)
        std::cout << r.label << " train_auc=" << format_double(r.train_curve.auc)
                  << " extended_auc=" << format_double(r.extended_curve.auc) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace msptsne
