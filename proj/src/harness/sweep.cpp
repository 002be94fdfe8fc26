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
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "fracsed/error.hpp"
#include "fracsed/harness.hpp"

namespace fracsed {

double quantile(std::vector<double> data, double q) {
  if (data.empty()) throw DomainError("quantile: empty data");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile: q must be in [0, 1]");
  std::sort(data.begin(), data.end());
  const double pos = q * static_cast<double>(data.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, data.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return data[lo] + frac * (data[hi] - data[lo]);
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  a.median = quantile(values, 0.5);
  a.q25 = quantile(values, 0.25);
  a.q75 = quantile(values, 0.75);
  a.iqr = a.q75 - a.q25;
  return a;
}

namespace {

std::filesystem::path seed_csv(const std::filesystem::path& base, std::size_t index) {
  std::filesystem::path p = base;
  const std::string ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  p.replace_extension();
  p += ".seed" + std::to_string(index) + ext;
  return p;
}

}  // namespace

SweepResult seed_sweep(const ExperimentConfig& cfg, const SweepOptions& options) {
  if (options.seeds == 0) throw ConfigError("seed sweep needs at least one seed");
  cfg.validate();

  SweepResult result;
  result.runs.resize(options.seeds);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < options.seeds; i = next++) {
      SeedOutcome& out = result.runs[i];
      out.seed = derive_seed(cfg.seed, i);
      ExperimentConfig local = cfg;
      local.seed = out.seed;
      RunOptions ro;
      ro.keep_trace = false;
      if (!options.track_column.empty()) ro.keep_columns.push_back(options.track_column);
      if (options.write_csv && !cfg.output.empty()) {
        ro.csv_override = seed_csv(cfg.output, i);
      } else {
        local.output.clear();
      }
      try {
        RunResult r = run(local, ro);
        out.summary = std::move(r.summary);
        if (!options.track_column.empty()) out.tracked = std::move(r.trace.front());
        out.ok = true;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };

  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, options.seeds);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }

  // Sequential reduction in seed order.
  const SeedOutcome* first_ok = nullptr;
  for (const SeedOutcome& r : result.runs) {
    if (!r.ok) {
      ++result.failures;
    } else if (!first_ok) {
      first_ok = &r;
    }
  }
  if (!first_ok) return result;
  for (const auto& [key, unused] : first_ok->summary) {
    std::vector<double> values;
    for (const SeedOutcome& r : result.runs) {
      if (!r.ok) continue;
      if (auto v = summary_value(r.summary, key)) values.push_back(*v);
    }
    result.aggregates.emplace_back(key, aggregate(values));
  }
  if (!options.track_column.empty()) {
    std::size_t n = 0;
    for (const SeedOutcome& r : result.runs) {
      if (!r.ok) continue;
      if (result.mean_tracked.empty()) result.mean_tracked.assign(r.tracked.size(), 0.0);
      for (std::size_t t = 0; t < r.tracked.size(); ++t) result.mean_tracked[t] += r.tracked[t];
      ++n;
    }
    for (double& v : result.mean_tracked) v /= static_cast<double>(n);
  }
  return result;
}

}  // namespace fracsed
