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

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <string>

#include "experiments.hpp"
#include "fracsed/error.hpp"
#include "fracsed/harness.hpp"

namespace fracsed {

std::optional<double> summary_value(const Summary& s, std::string_view key) {
  for (const auto& [k, v] : s) {
    if (k == key) return v;
  }
  return std::nullopt;
}

const std::vector<double>* RunResult::column(std::string_view name) const {
  for (std::size_t i = 0; i < trace_columns.size(); ++i) {
    if (trace_columns[i] == name) return &trace[i];
  }
  return nullptr;
}

std::vector<std::string> trace_header(const ExperimentConfig& cfg) {
  std::vector<std::string> h{"t", "mu", "loss", "d_max"};
  const std::size_t layers = detail::layer_count(cfg);
  for (const char* group : {"alpha_", "d_zeta_", "delta_norm_"}) {
    for (std::size_t j = 0; j < layers; ++j) h.push_back(group + std::to_string(j + 1));
  }
  for (auto& m : detail::metric_names(cfg)) h.push_back(std::move(m));
  return h;
}

std::filesystem::path summary_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".summary");
  return p;
}

void write_summary(const std::filesystem::path& path, const Summary& summary) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    for (const auto& [k, v] : summary) out << k << " = " << format_number(v) << '\n';
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move summary into place at " + path.string() + ": " + ec.message());
}

namespace {

class CsvSink {
 public:
  CsvSink() = default;
  CsvSink(const std::filesystem::path& path, const std::vector<std::string>& header)
      : path_(path) {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
    }
    out_.open(path, std::ios::trunc);
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) line += ',';
      line += header[i];
    }
    emit(line);
  }

  bool active() const { return out_.is_open(); }

  void row(std::size_t t, const std::vector<double>& values) {
    std::string line = std::to_string(t);
    for (double v : values) {
      line += ',';
      line += format_number(v);
    }
    emit(line);
  }

 private:
  void emit(std::string& line) {
    line += '\n';
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    if (!out_) throw IoError("write failed for " + path_.string());
  }

  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace

RunResult run(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.validate();
  RunResult result;
  result.columns = trace_header(cfg);

  std::vector<bool> keep(result.columns.size(), options.keep_trace);
  for (const std::string& name : options.keep_columns) {
    bool found = false;
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
      if (result.columns[c] == name) keep[c] = found = true;
    }
    if (!found) throw ConfigError("no trace column named '" + name + "'");
  }
  for (std::size_t c = 0; c < keep.size(); ++c) {
    if (keep[c]) result.trace_columns.push_back(result.columns[c]);
  }
  result.trace.resize(result.trace_columns.size());

  std::optional<std::filesystem::path> csv = options.csv_override;
  if (!csv && !cfg.output.empty()) csv = std::filesystem::path(cfg.output);
  std::optional<std::filesystem::path> summary_file;
  if (csv) {
    summary_file = summary_path(*csv);
    std::error_code ec;
    std::filesystem::remove(*summary_file, ec);
  }

  auto experiment = detail::make_experiment(cfg);
  Optimizer opt(cfg.optimizer, cfg.optim, experiment->initial_params(), cfg.log_sed);
  CsvSink sink = csv ? CsvSink(*csv, result.columns) : CsvSink();

  const std::size_t iterations = cfg.effective_iterations();
  const std::size_t layers = opt.state().layer_count();
  double min_loss = std::numeric_limits<double>::infinity();
  Layers grads;
  std::vector<double> metrics;
  std::vector<double> row;
  for (std::size_t t = 0; t < iterations; ++t) {
    double loss = 0.0;
    experiment->evaluate(t, opt.state().layers, loss, grads, metrics);
    const std::vector<double> deltas = layer_delta_norms(opt.state());
    const StepReport rep = opt.step(std::move(grads));

    row.clear();
    row.push_back(rep.mu);
    row.push_back(loss);
    row.push_back(rep.d_max);
    row.insert(row.end(), rep.alpha.begin(), rep.alpha.end());
    row.insert(row.end(), rep.d_zeta.begin(), rep.d_zeta.end());
    row.insert(row.end(), deltas.begin(), deltas.end());
    row.insert(row.end(), metrics.begin(), metrics.end());
    if (row.size() + 1 != result.columns.size() || rep.alpha.size() != layers) {
      throw DimensionError("trace row has " + std::to_string(row.size() + 1) + " fields for " +
                           std::to_string(result.columns.size()) + " columns");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        throw DivergenceError("non-finite " + result.columns[c + 1] + " at iteration " +
                                  std::to_string(t),
                              t);
      }
    }
    if (sink.active()) sink.row(t, row);
    for (std::size_t c = 0, k = 0; c < keep.size(); ++c) {
      if (!keep[c]) continue;
      result.trace[k++].push_back(c == 0 ? static_cast<double>(t) : row[c - 1]);
    }
    min_loss = std::min(min_loss, loss);
  }

  result.final_params = opt.state().layers;
  experiment->summarize(result.final_params, result.summary);
  const double final_loss = *summary_value(result.summary, "final_loss");
  if (!std::isfinite(final_loss)) {
    throw DivergenceError("non-finite final loss", iterations);
  }
  result.summary.emplace_back("min_loss", std::min(min_loss, final_loss));
  result.summary.emplace_back("iterations", static_cast<double>(iterations));
  result.summary.emplace_back("final_d_max", opt.sed().d_max_running);
  if (cfg.problem == ProblemKind::quadratic) {
    const double f_star = final_loss - *summary_value(result.summary, "final_gap");
    result.summary.emplace_back("min_gap", std::min(min_loss, final_loss) - f_star);
  }
  if (summary_file) write_summary(*summary_file, result.summary);
  return result;
}

}  // namespace fracsed
