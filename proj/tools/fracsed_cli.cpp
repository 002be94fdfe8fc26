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

// Command-line runner: `fracsed run|sweep|ratefit`. Uses only the C API.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracsed/fracsed.h"

namespace {

struct ConfigDeleter {
  void operator()(fracsed_config* c) const { fracsed_config_free(c); }
};
struct ResultDeleter {
  void operator()(fracsed_result* r) const { fracsed_result_free(r); }
};
struct SweepDeleter {
  void operator()(fracsed_sweep* s) const { fracsed_sweep_free(s); }
};
using ConfigPtr = std::unique_ptr<fracsed_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<fracsed_result, ResultDeleter>;
using SweepPtr = std::unique_ptr<fracsed_sweep, SweepDeleter>;

// Process exit status for a library status.
int exit_code(fracsed_status s) {
  switch (s) {
    case FRACSED_OK:
      return 0;
    case FRACSED_ERR_DIVERGENCE:
    case FRACSED_ERR_NUMERICAL:
      return 2;
    default:
      return 1;
  }
}

struct Failure {
  fracsed_status status;
};

void check(fracsed_status s, const std::string& what) {
  if (s == FRACSED_OK) return;
  std::cerr << "fracsed: " << what << ": " << fracsed_status_string(s) << ": "
            << fracsed_last_error() << '\n';
  throw Failure{s};
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "Experiment config file");
  if (config_required) c->required();
  c->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Override the config seed");
  cmd->add_option("--out", o.out, "CSV output path (overrides the config)");
  cmd->add_option("--override", o.overrides, "key=value, repeatable")->allow_extra_args(false);
}

ConfigPtr load(const CommonOptions& o) {
  fracsed_config* raw = nullptr;
  check(fracsed_config_load(o.config.c_str(), &raw), "loading " + o.config);
  ConfigPtr cfg(raw);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "fracsed: --override expects key=value, got '" << kv << "'\n";
      throw Failure{FRACSED_ERR_VALIDATION};
    }
    check(fracsed_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()),
          "--override " + kv);
  }
  if (o.seed) check(fracsed_config_set(cfg.get(), "seed", std::to_string(*o.seed).c_str()), "--seed");
  if (!o.out.empty()) check(fracsed_config_set(cfg.get(), "output", o.out.c_str()), "--out");
  check(fracsed_config_validate(cfg.get()), "config");
  return cfg;
}

std::string config_value(const fracsed_config* cfg, const char* key) {
  size_t needed = 0;
  check(fracsed_config_get(cfg, key, nullptr, 0, &needed), key);
  std::string s(needed, '\0');
  check(fracsed_config_get(cfg, key, s.data(), s.size(), nullptr), key);
  s.resize(needed - 1);
  return s;
}

int cmd_run(const CommonOptions& o) {
  ConfigPtr cfg = load(o);
  fracsed_result* raw = nullptr;
  check(fracsed_run(cfg.get(), nullptr, &raw), "run");
  ResultPtr res(raw);
  for (size_t i = 0; i < fracsed_result_key_count(res.get()); ++i) {
    const char* key = fracsed_result_key(res.get(), i);
    double v = 0.0;
    check(fracsed_result_value(res.get(), key, &v), key);
    std::cout << key << " = " << format(v) << '\n';
  }
  return 0;
}

SweepPtr sweep(const fracsed_config* cfg, std::size_t seeds, std::size_t threads,
               const std::string& track) {
  fracsed_sweep* raw = nullptr;
  check(fracsed_sweep_run(cfg, seeds, threads, track.empty() ? nullptr : track.c_str(), &raw),
        "sweep");
  return SweepPtr(raw);
}

int cmd_sweep(const CommonOptions& o, std::size_t seeds, std::size_t threads,
              const std::string& track) {
  ConfigPtr cfg = load(o);
  SweepPtr sw = sweep(cfg.get(), seeds, threads, track);
  const size_t n = fracsed_sweep_seed_count(sw.get());
  for (size_t i = 0; i < n; ++i) {
    std::uint64_t seed = 0;
    int ok = 0;
    check(fracsed_sweep_seed(sw.get(), i, &seed, &ok), "seed");
    if (!ok) std::cerr << "seed " << seed << " failed: " << fracsed_sweep_seed_error(sw.get(), i) << '\n';
  }
  std::cout << "seeds = " << n << "\nfailures = " << fracsed_sweep_failures(sw.get()) << '\n';
  for (size_t i = 0; i < fracsed_sweep_aggregate_count(sw.get()); ++i) {
    const char* key = fracsed_sweep_aggregate_key(sw.get(), i);
    fracsed_aggregate a{};
    check(fracsed_sweep_aggregate(sw.get(), key, &a), key);
    std::cout << key << " = mean " << format(a.mean) << ", median " << format(a.median)
              << ", iqr " << format(a.iqr) << " [" << format(a.q25) << ", " << format(a.q75)
              << "], n " << a.count << '\n';
  }
  const std::string output = config_value(cfg.get(), "output");
  if (!output.empty()) {
    std::filesystem::path p(output);
    p.replace_extension(".sweep");
    check(fracsed_sweep_write_summary(sw.get(), p.string().c_str()), "sweep summary");
  }
  return fracsed_sweep_failures(sw.get()) == n ? 2 : 0;
}

void print_fit(const fracsed_rate_fit_result& f) {
  std::cout << "slope = " << format(f.slope) << "\nintercept = " << format(f.intercept)
            << "\nr_squared = " << format(f.r_squared) << '\n';
}

int cmd_ratefit(const CommonOptions& o, const std::string& in, const std::string& column,
                std::size_t seeds, std::size_t threads, bool raw_series) {
  fracsed_rate_fit_result fit{};
  if (!in.empty()) {
    check(fracsed_rate_fit_csv(in.c_str(), column.c_str(), raw_series ? 0 : 1, &fit), in);
  } else {
    ConfigPtr cfg = load(o);
    SweepPtr sw = sweep(cfg.get(), seeds, threads, column);
    const double* data = nullptr;
    size_t len = 0;
    check(fracsed_sweep_tracked_mean(sw.get(), &data, &len), "tracked mean");
    check(fracsed_rate_fit(data, len, raw_series ? 0 : 1, &fit), "rate fit");
    std::cout << "seeds = " << fracsed_sweep_seed_count(sw.get())
              << "\nfailures = " << fracsed_sweep_failures(sw.get()) << '\n';
  }
  print_fit(fit);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional-order SGD with two-scale effective dimension adaptation"};
  app.set_version_flag("--version", std::string(fracsed_version()));
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, fit_opts;
  auto* run = app.add_subcommand("run", "Run one experiment and stream its trace to CSV");
  add_common(run, run_opts, true);

  std::size_t seeds = 1, threads = 0;
  std::string track;
  auto* sw = app.add_subcommand("sweep", "Run an experiment over derived seeds");
  add_common(sw, sweep_opts, true);
  sw->add_option("--seeds", seeds, "Number of seeds")->required()->check(CLI::PositiveNumber);
  sw->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sw->add_option("--track", track, "Trace column to average over seeds");

  std::string in, column = "gap";
  std::size_t fit_seeds = 20, fit_threads = 0;
  bool raw_series = false;
  auto* fit = app.add_subcommand("ratefit", "Fit the log-log slope of a running-min series");
  add_common(fit, fit_opts, false);
  auto* in_opt = fit->add_option("--in", in, "CSV trace to read")->check(CLI::ExistingFile);
  fit->add_option("--column", column, "Column to fit")->capture_default_str();
  fit->add_option("--seeds", fit_seeds, "Seeds when running from --config")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fit->add_option("--threads", fit_threads, "Worker threads (0 = all cores)");
  fit->add_flag("--raw", raw_series, "Fit the series itself instead of its running minimum");
  in_opt->excludes(fit->get_option("--config"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*sw) return cmd_sweep(sweep_opts, seeds, threads, track);
    if (*fit) {
      if (in.empty() && fit_opts.config.empty()) {
        std::cerr << "fracsed ratefit: give --in <csv> or --config <file>\n";
        return 1;
      }
      return cmd_ratefit(fit_opts, in, column, fit_seeds, fit_threads, raw_series);
    }
  } catch (const Failure& f) {
    return exit_code(f.status);
  }
  return 1;
}
