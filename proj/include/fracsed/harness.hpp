// Copyright 2026 The fracsed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRACSED_HARNESS_HPP
#define FRACSED_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fracsed/noise.hpp"
#include "fracsed/optim.hpp"
#include "fracsed/problems.hpp"

namespace fracsed {

enum class ProblemKind { ar, quadratic, mlp };

/// Everything one run needs. Parsed from flat `key = value` text.
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::ar;
  OptimizerKind optimizer = OptimizerKind::twosed;
  std::uint64_t seed = 1;
  std::size_t iterations = 2000;
  std::string output;  // CSV path, empty for none
  OptimConfig optim;
  bool log_sed = true;  // baselines also report 2SED columns

  // ar
  std::vector<double> ar_coeffs{1.5, -0.7};
  std::size_t ar_horizon = 0;  // 0 means iterations + order
  NoiseModel noise = NoiseModel::normal(0.7071067811865476);

  // quadratic
  std::vector<double> quad_diag{1.0, 10.0};
  std::vector<double> quad_b{0.0, 0.0};
  std::vector<double> quad_theta0{1.0, 1.0};
  double grad_noise_std = 1.0;

  // mlp
  std::string data_dir;
  std::size_t train_size = 1000;
  std::size_t test_size = 1000;
  std::vector<std::size_t> hidden{32};
  Activation activation = Activation::relu;
  double init_scale = 0.05;
  std::size_t batch_size = 32;
  std::size_t epochs = 0;  // when > 0, overrides iterations

  void validate() const;
  /// Iterations actually executed (epochs * batches per epoch for mlp).
  std::size_t effective_iterations() const;
};

/// Parses config text. Unknown keys, duplicates and malformed values throw
/// ConfigError with the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Sets one key from its text form; throws ConfigError for unknown keys.
void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// Text form of one key, as accepted by set_config_value.
std::string get_config_value(const ExperimentConfig& cfg, std::string_view key);
/// Every recognised key in canonical order.
const std::vector<std::string>& config_keys();
/// Canonical text of a full config; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& cfg);

/// Shortest round-trip decimal form.
std::string format_number(double v);

using Summary = std::vector<std::pair<std::string, double>>;

/// Value for `key`, if present.
std::optional<double> summary_value(const Summary& s, std::string_view key);

struct RunOptions {
  bool keep_trace = true;           // retain every column in memory
  std::vector<std::string> keep_columns;  // retain only these when keep_trace is false
  std::optional<std::filesystem::path> csv_override;
};

struct RunResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> trace;  // trace[c][row] for retained columns
  std::vector<std::string> trace_columns;
  Summary summary;
  Layers final_params;

  /// Retained column by name, or nullptr.
  const std::vector<double>* column(std::string_view name) const;
};

/// CSV column names for a config.
std::vector<std::string> trace_header(const ExperimentConfig& cfg);

/// Executes the configured experiment. Writes the CSV (row-flushed) and, on
/// success only, `<output>.summary` beside it.
RunResult run(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Summary file path for a CSV path.
std::filesystem::path summary_path(const std::filesystem::path& csv);
void write_summary(const std::filesystem::path& path, const Summary& summary);

struct Aggregate {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double iqr = 0.0;
};

/// Linear-interpolated quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> data, double q);
Aggregate aggregate(const std::vector<double>& values);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Summary summary;
  std::vector<double> tracked;  // the sweep's track_column, if requested
};

struct SweepResult {
  std::vector<SeedOutcome> runs;
  std::size_t failures = 0;
  std::vector<std::pair<std::string, Aggregate>> aggregates;
  /// Seed-mean of track_column over successful runs.
  std::vector<double> mean_tracked;
};

struct SweepOptions {
  std::size_t seeds = 1;
  std::size_t threads = 0;  // 0 means hardware concurrency
  std::string track_column;
  bool write_csv = true;  // per-seed `<stem>.seed<i>.csv` when output is set
};

/// Runs seeds derive_seed(cfg.seed, i), i < seeds. Failed seeds are counted and
/// skipped in the aggregates.
SweepResult seed_sweep(const ExperimentConfig& cfg, const SweepOptions& options);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Running minimum of a series.
std::vector<double> running_min(const std::vector<double>& series);

/// Least-squares fit of log(series[t-1]) on log(t) for t in [T/10, T].
RateFit rate_fit(const std::vector<double>& series);

/// Column `name` of a CSV written by run().
std::vector<double> read_csv_column(const std::filesystem::path& path, std::string_view name);

}  // namespace fracsed

#endif  // FRACSED_HARNESS_HPP
