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

#include "fracsed/fracsed.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "fracsed/error.hpp"
#include "fracsed/harness.hpp"

struct fracsed_config {
  fracsed::ExperimentConfig cfg;
};

struct fracsed_result {
  fracsed::RunResult run;
};

struct fracsed_sweep {
  fracsed::SweepResult sweep;
  std::size_t seeds = 0;
  std::string tracked;
};

namespace {

thread_local std::string g_last_error;

fracsed_status fail(fracsed_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

fracsed_status ok() {
  g_last_error.clear();
  return FRACSED_OK;
}

fracsed_status map_code(fracsed::ErrorCode code) {
  using fracsed::ErrorCode;
  switch (code) {
    case ErrorCode::domain:
    case ErrorCode::dimension:
    case ErrorCode::psd_violation:
    case ErrorCode::config:
      return FRACSED_ERR_VALIDATION;
    case ErrorCode::io:
    case ErrorCode::format:
      return FRACSED_ERR_IO;
    case ErrorCode::divergence:
      return FRACSED_ERR_DIVERGENCE;
    case ErrorCode::numerical:
      return FRACSED_ERR_NUMERICAL;
  }
  return FRACSED_ERR_INTERNAL;
}

template <class F>
fracsed_status guarded(F&& f) {
  try {
    return f();
  } catch (const fracsed::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRACSED_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRACSED_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FRACSED_ERR_INTERNAL, "unknown error");
  }
}

fracsed_status null_arg(const char* name) {
  return fail(FRACSED_ERR_ARGUMENT, std::string(name) + " must not be NULL");
}

fracsed_status copy_out(const std::string& s, char* buf, std::size_t cap, std::size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (buf && cap > 0) {
    const std::size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return ok();
}

void fill(fracsed_rate_fit_result* out, const fracsed::RateFit& f) {
  out->slope = f.slope;
  out->intercept = f.intercept;
  out->r_squared = f.r_squared;
}

}  // namespace

extern "C" {

const char* fracsed_version(void) { return "0.1.0"; }

const char* fracsed_status_string(fracsed_status status) {
  switch (status) {
    case FRACSED_OK: return "ok";
    case FRACSED_ERR_VALIDATION: return "validation error";
    case FRACSED_ERR_DIVERGENCE: return "divergence";
    case FRACSED_ERR_IO: return "i/o error";
    case FRACSED_ERR_NUMERICAL: return "numerical error";
    case FRACSED_ERR_ARGUMENT: return "invalid argument";
    case FRACSED_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fracsed_last_error(void) { return g_last_error.c_str(); }

fracsed_status fracsed_config_new(fracsed_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    *out = new fracsed_config{};
    return ok();
  });
}

fracsed_status fracsed_config_load(const char* path, fracsed_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!path) return null_arg("path");
  return guarded([&] {
    *out = new fracsed_config{fracsed::load_config(path)};
    return ok();
  });
}

fracsed_status fracsed_config_parse(const char* text, fracsed_config** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!text) return null_arg("text");
  return guarded([&] {
    *out = new fracsed_config{fracsed::parse_config(text)};
    return ok();
  });
}

fracsed_status fracsed_config_set(fracsed_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  return guarded([&] {
    fracsed::ExperimentConfig next = cfg->cfg;
    fracsed::set_config_value(next, key, value);
    cfg->cfg = std::move(next);
    return ok();
  });
}

fracsed_status fracsed_config_get(const fracsed_config* cfg, const char* key, char* buf,
                                  size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  if (!key) return null_arg("key");
  return guarded([&] { return copy_out(fracsed::get_config_value(cfg->cfg, key), buf, cap, needed); });
}

fracsed_status fracsed_config_validate(const fracsed_config* cfg) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    cfg->cfg.validate();
    return ok();
  });
}

fracsed_status fracsed_config_to_text(const fracsed_config* cfg, char* buf, size_t cap,
                                      size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guarded([&] { return copy_out(fracsed::to_text(cfg->cfg), buf, cap, needed); });
}

void fracsed_config_free(fracsed_config* cfg) { delete cfg; }

fracsed_status fracsed_run(const fracsed_config* cfg, const char* csv_path, fracsed_result** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    fracsed::RunOptions options;
    if (csv_path) options.csv_override = std::filesystem::path(csv_path);
    *out = new fracsed_result{fracsed::run(cfg->cfg, options)};
    return ok();
  });
}

fracsed_status fracsed_result_value(const fracsed_result* res, const char* key, double* value) {
  if (!res) return null_arg("res");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  const auto v = fracsed::summary_value(res->run.summary, key);
  if (!v) return fail(FRACSED_ERR_ARGUMENT, std::string("no summary value named '") + key + "'");
  *value = *v;
  return ok();
}

size_t fracsed_result_key_count(const fracsed_result* res) {
  return res ? res->run.summary.size() : 0;
}

const char* fracsed_result_key(const fracsed_result* res, size_t index) {
  if (!res || index >= res->run.summary.size()) return nullptr;
  return res->run.summary[index].first.c_str();
}

size_t fracsed_result_trace_length(const fracsed_result* res) {
  if (!res || res->run.trace.empty()) return 0;
  return res->run.trace.front().size();
}

size_t fracsed_result_column_count(const fracsed_result* res) {
  return res ? res->run.trace_columns.size() : 0;
}

const char* fracsed_result_column_name(const fracsed_result* res, size_t index) {
  if (!res || index >= res->run.trace_columns.size()) return nullptr;
  return res->run.trace_columns[index].c_str();
}

fracsed_status fracsed_result_trace_column(const fracsed_result* res, const char* name,
                                           const double** data, size_t* length) {
  if (!res) return null_arg("res");
  if (!name) return null_arg("name");
  if (!data || !length) return null_arg("data/length");
  const auto* col = res->run.column(name);
  if (!col) return fail(FRACSED_ERR_ARGUMENT, std::string("no trace column named '") + name + "'");
  *data = col->data();
  *length = col->size();
  return ok();
}

size_t fracsed_result_param_layers(const fracsed_result* res) {
  return res ? res->run.final_params.size() : 0;
}

fracsed_status fracsed_result_params(const fracsed_result* res, size_t layer,
                                     const double** data, size_t* length) {
  if (!res) return null_arg("res");
  if (!data || !length) return null_arg("data/length");
  if (layer >= res->run.final_params.size()) {
    return fail(FRACSED_ERR_ARGUMENT, "layer index " + std::to_string(layer) + " out of range");
  }
  *data = res->run.final_params[layer].data();
  *length = res->run.final_params[layer].size();
  return ok();
}

fracsed_status fracsed_result_write_summary(const fracsed_result* res, const char* path) {
  if (!res) return null_arg("res");
  if (!path) return null_arg("path");
  return guarded([&] {
    fracsed::write_summary(path, res->run.summary);
    return ok();
  });
}

void fracsed_result_free(fracsed_result* res) { delete res; }

fracsed_status fracsed_sweep_run(const fracsed_config* cfg, size_t seeds, size_t threads,
                                 const char* track_column, fracsed_sweep** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  if (!cfg) return null_arg("cfg");
  return guarded([&] {
    fracsed::SweepOptions options;
    options.seeds = seeds;
    options.threads = threads;
    if (track_column) options.track_column = track_column;
    auto* sw = new fracsed_sweep{fracsed::seed_sweep(cfg->cfg, options), seeds,
                                 options.track_column};
    *out = sw;
    return ok();
  });
}

size_t fracsed_sweep_seed_count(const fracsed_sweep* sw) { return sw ? sw->sweep.runs.size() : 0; }

size_t fracsed_sweep_failures(const fracsed_sweep* sw) { return sw ? sw->sweep.failures : 0; }

fracsed_status fracsed_sweep_seed(const fracsed_sweep* sw, size_t index, uint64_t* seed, int* ok_flag) {
  if (!sw) return null_arg("sw");
  if (index >= sw->sweep.runs.size()) {
    return fail(FRACSED_ERR_ARGUMENT, "seed index " + std::to_string(index) + " out of range");
  }
  if (seed) *seed = sw->sweep.runs[index].seed;
  if (ok_flag) *ok_flag = sw->sweep.runs[index].ok ? 1 : 0;
  return ok();
}

const char* fracsed_sweep_seed_error(const fracsed_sweep* sw, size_t index) {
  if (!sw || index >= sw->sweep.runs.size()) return nullptr;
  return sw->sweep.runs[index].error.c_str();
}

fracsed_status fracsed_sweep_seed_value(const fracsed_sweep* sw, size_t index, const char* key,
                                        double* value) {
  if (!sw) return null_arg("sw");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  if (index >= sw->sweep.runs.size()) {
    return fail(FRACSED_ERR_ARGUMENT, "seed index " + std::to_string(index) + " out of range");
  }
  const auto v = fracsed::summary_value(sw->sweep.runs[index].summary, key);
  if (!v) return fail(FRACSED_ERR_ARGUMENT, std::string("no summary value named '") + key + "'");
  *value = *v;
  return ok();
}

size_t fracsed_sweep_aggregate_count(const fracsed_sweep* sw) {
  return sw ? sw->sweep.aggregates.size() : 0;
}

const char* fracsed_sweep_aggregate_key(const fracsed_sweep* sw, size_t index) {
  if (!sw || index >= sw->sweep.aggregates.size()) return nullptr;
  return sw->sweep.aggregates[index].first.c_str();
}

fracsed_status fracsed_sweep_aggregate(const fracsed_sweep* sw, const char* key,
                                       fracsed_aggregate* out) {
  if (!sw) return null_arg("sw");
  if (!key) return null_arg("key");
  if (!out) return null_arg("out");
  for (const auto& [k, a] : sw->sweep.aggregates) {
    if (k == key) {
      *out = {a.count, a.mean, a.median, a.q25, a.q75, a.iqr};
      return ok();
    }
  }
  return fail(FRACSED_ERR_ARGUMENT, std::string("no aggregate named '") + key + "'");
}

fracsed_status fracsed_sweep_tracked_mean(const fracsed_sweep* sw, const double** data,
                                          size_t* length) {
  if (!sw) return null_arg("sw");
  if (!data || !length) return null_arg("data/length");
  if (sw->tracked.empty()) return fail(FRACSED_ERR_ARGUMENT, "sweep tracked no column");
  *data = sw->sweep.mean_tracked.data();
  *length = sw->sweep.mean_tracked.size();
  return ok();
}

fracsed_status fracsed_sweep_rate_fit(const fracsed_sweep* sw, fracsed_rate_fit_result* out) {
  if (!sw) return null_arg("sw");
  if (!out) return null_arg("out");
  if (sw->tracked.empty()) return fail(FRACSED_ERR_ARGUMENT, "sweep tracked no column");
  return guarded([&] {
    fill(out, fracsed::rate_fit(fracsed::running_min(sw->sweep.mean_tracked)));
    return ok();
  });
}

fracsed_status fracsed_sweep_write_summary(const fracsed_sweep* sw, const char* path) {
  if (!sw) return null_arg("sw");
  if (!path) return null_arg("path");
  return guarded([&] {
    fracsed::Summary s;
    s.emplace_back("seeds", static_cast<double>(sw->sweep.runs.size()));
    s.emplace_back("failures", static_cast<double>(sw->sweep.failures));
    for (const auto& [k, a] : sw->sweep.aggregates) {
      s.emplace_back(k + ".mean", a.mean);
      s.emplace_back(k + ".median", a.median);
      s.emplace_back(k + ".q25", a.q25);
      s.emplace_back(k + ".q75", a.q75);
      s.emplace_back(k + ".iqr", a.iqr);
    }
    if (!sw->tracked.empty() && sw->sweep.mean_tracked.size() >= 50) {
      const auto fit = fracsed::rate_fit(fracsed::running_min(sw->sweep.mean_tracked));
      s.emplace_back("rate_slope", fit.slope);
      s.emplace_back("rate_intercept", fit.intercept);
      s.emplace_back("rate_r_squared", fit.r_squared);
    }
    fracsed::write_summary(path, s);
    return ok();
  });
}

void fracsed_sweep_free(fracsed_sweep* sw) { delete sw; }

fracsed_status fracsed_rate_fit(const double* series, size_t length, int running_min,
                                fracsed_rate_fit_result* out) {
  if (!series && length > 0) return null_arg("series");
  if (!out) return null_arg("out");
  return guarded([&] {
    std::vector<double> s(series, series + length);
    if (running_min) s = fracsed::running_min(s);
    fill(out, fracsed::rate_fit(s));
    return ok();
  });
}

fracsed_status fracsed_rate_fit_csv(const char* path, const char* column, int running_min,
                                    fracsed_rate_fit_result* out) {
  if (!path) return null_arg("path");
  if (!column) return null_arg("column");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto s = fracsed::read_csv_column(path, column);
    if (running_min) s = fracsed::running_min(s);
    fill(out, fracsed::rate_fit(s));
    return ok();
  });
}

}  // extern "C"
