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

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>

#include "fracsed/error.hpp"
#include "fracsed/harness.hpp"

namespace fracsed {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* want) {
  throw ConfigError(std::string(key) + ": expected " + want + ", got '" + std::string(value) +
                    "'");
}

double parse_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || v.empty()) {
    bad_value(key, v, "a number");
  }
  if (!std::isfinite(out)) bad_value(key, v, "a finite number");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || end != v.data() + v.size() || v.empty()) {
    bad_value(key, v, "a non-negative integer");
  }
  return out;
}

std::size_t parse_size(std::string_view key, std::string_view v) {
  const auto x = parse_u64(key, v);
  if (x > std::numeric_limits<std::size_t>::max()) bad_value(key, v, "a smaller integer");
  return static_cast<std::size_t>(x);
}

bool parse_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "true or false");
}

template <class F>
auto parse_list(std::string_view key, std::string_view v, F item) {
  std::vector<decltype(item(key, v))> out;
  v = trim(v);
  if (v.empty()) bad_value(key, v, "a comma-separated list");
  std::size_t start = 0;
  while (true) {
    const auto comma = v.find(',', start);
    const auto piece = trim(v.substr(start, comma == std::string_view::npos ? v.npos : comma - start));
    out.push_back(item(key, piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += format_number(xs[i]);
    } else {
      out += std::to_string(xs[i]);
    }
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class Ref>
Field real_field(std::string key, Ref ref) {
  return {key,
          [key, ref](ExperimentConfig& c, std::string_view v) { ref(c) = parse_double(key, v); },
          [ref](const ExperimentConfig& c) {
            return format_number(ref(c));
          }};
}

template <class Ref>
Field size_field(std::string key, Ref ref) {
  return {key,
          [key, ref](ExperimentConfig& c, std::string_view v) { ref(c) = parse_size(key, v); },
          [ref](const ExperimentConfig& c) {
            return std::to_string(ref(c));
          }};
}

template <class Ref>
Field list_field(std::string key, Ref ref) {
  return {key,
          [key, ref](ExperimentConfig& c, std::string_view v) {
            ref(c) = parse_list(key, v, parse_double);
          },
          [ref](const ExperimentConfig& c) { return join(ref(c)); }};
}

template <class Ref>
Field string_field(std::string key, Ref ref) {
  return {key, [ref](ExperimentConfig& c, std::string_view v) { ref(c) = std::string(trim(v)); },
          [ref](const ExperimentConfig& c) { return ref(c); }};
}

template <class Ref, class E>
Field choice_field(std::string key, Ref ref, std::vector<std::pair<std::string, E>> names) {
  return {key,
          [key, ref, names](ExperimentConfig& c, std::string_view v) {
            v = trim(v);
            for (const auto& [name, value] : names) {
              if (v == name) {
                ref(c) = value;
                return;
              }
            }
            std::string want = "one of";
            for (const auto& n : names) want += " " + n.first;
            bad_value(key, v, want.c_str());
          },
          [ref, names](const ExperimentConfig& c) {
            const E value = ref(c);
            for (const auto& [name, e] : names) {
              if (e == value) return name;
            }
            return std::string("?");
          }};
}

#define FRACSED_REF(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(choice_field("problem", FRACSED_REF(problem),
                             std::vector<std::pair<std::string, ProblemKind>>{
                                 {"ar", ProblemKind::ar},
                                 {"quadratic", ProblemKind::quadratic},
                                 {"mlp", ProblemKind::mlp}}));
    f.push_back(choice_field("optimizer", FRACSED_REF(optimizer),
                             std::vector<std::pair<std::string, OptimizerKind>>{
                                 {"sgd", OptimizerKind::sgd},
                                 {"fosgd", OptimizerKind::fosgd},
                                 {"2sedfosgd", OptimizerKind::twosed}}));
    f.push_back({"seed",
                 [](ExperimentConfig& c, std::string_view v) { c.seed = parse_u64("seed", v); },
                 [](const ExperimentConfig& c) { return std::to_string(c.seed); }});
    f.push_back(size_field("iterations", FRACSED_REF(iterations)));
    f.push_back(string_field("output", FRACSED_REF(output)));

    f.push_back(real_field("mu0", FRACSED_REF(optim.mu0)));
    f.push_back(real_field("delta", FRACSED_REF(optim.delta)));
    f.push_back(real_field("alpha0", FRACSED_REF(optim.sed.alpha0)));
    f.push_back(real_field("beta", FRACSED_REF(optim.sed.beta)));
    f.push_back(real_field("alpha_min", FRACSED_REF(optim.sed.alpha_min)));
    f.push_back(real_field("zeta", FRACSED_REF(optim.sed.zeta)));
    f.push_back(real_field("epsilon", FRACSED_REF(optim.sed.epsilon)));
    f.push_back(real_field("fisher_decay", FRACSED_REF(optim.fisher_decay)));
    f.push_back(choice_field("fisher_source", FRACSED_REF(optim.sed.source),
                             std::vector<std::pair<std::string, FisherSource>>{
                                 {"normalized", FisherSource::normalized},
                                 {"raw", FisherSource::raw}}));
    f.push_back(size_field("diag_threshold", FRACSED_REF(optim.diagonal_threshold)));
    f.push_back(choice_field("scaling_mode", FRACSED_REF(optim.scaling),
                             std::vector<std::pair<std::string, ScalingMode>>{
                                 {"elementwise", ScalingMode::elementwise},
                                 {"layer_norm", ScalingMode::layer_norm}}));
    f.push_back({"grad_clip",
                 [](ExperimentConfig& c, std::string_view v) {
                   v = trim(v);
                   if (v == "none") {
                     c.optim.grad_clip.reset();
                   } else {
                     c.optim.grad_clip = parse_double("grad_clip", v);
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return c.optim.grad_clip ? format_number(*c.optim.grad_clip)
                                            : std::string("none");
                 }});
    f.push_back({"log_sed",
                 [](ExperimentConfig& c, std::string_view v) { c.log_sed = parse_bool("log_sed", v); },
                 [](const ExperimentConfig& c) { return std::string(c.log_sed ? "true" : "false"); }});

    f.push_back(list_field("ar_coeffs", FRACSED_REF(ar_coeffs)));
    f.push_back(size_field("ar_horizon", FRACSED_REF(ar_horizon)));
    f.push_back(choice_field("noise", FRACSED_REF(noise.kind),
                             std::vector<std::pair<std::string, NoiseModel::Kind>>{
                                 {"none", NoiseModel::Kind::none},
                                 {"gaussian", NoiseModel::Kind::gaussian},
                                 {"stable", NoiseModel::Kind::stable}}));
    f.push_back(real_field("noise_std", FRACSED_REF(noise.std_dev)));
    f.push_back(real_field("stable_alpha", FRACSED_REF(noise.stable.alpha_tail)));
    f.push_back(real_field("stable_skew", FRACSED_REF(noise.stable.skew)));
    f.push_back(real_field("stable_scale", FRACSED_REF(noise.stable.scale)));
    f.push_back(real_field("stable_location", FRACSED_REF(noise.stable.location)));

    f.push_back(list_field("quad_diag", FRACSED_REF(quad_diag)));
    f.push_back(list_field("quad_b", FRACSED_REF(quad_b)));
    f.push_back(list_field("quad_theta0", FRACSED_REF(quad_theta0)));
    f.push_back(real_field("grad_noise_std", FRACSED_REF(grad_noise_std)));

    f.push_back(string_field("data_dir", FRACSED_REF(data_dir)));
    f.push_back(size_field("train_size", FRACSED_REF(train_size)));
    f.push_back(size_field("test_size", FRACSED_REF(test_size)));
    f.push_back({"hidden",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (trim(v) == "none") {
                     c.hidden.clear();
                   } else {
                     c.hidden = parse_list("hidden", v, parse_size);
                   }
                 },
                 [](const ExperimentConfig& c) {
                   return c.hidden.empty() ? std::string("none") : join(c.hidden);
                 }});
    f.push_back(choice_field("activation", FRACSED_REF(activation),
                             std::vector<std::pair<std::string, Activation>>{
                                 {"relu", Activation::relu}, {"tanh", Activation::tanh}}));
    f.push_back(real_field("init_scale", FRACSED_REF(init_scale)));
    f.push_back(size_field("batch_size", FRACSED_REF(batch_size)));
    f.push_back(size_field("epochs", FRACSED_REF(epochs)));
    return f;
  }();
  return table;
}

#undef FRACSED_REF

const Field& find_field(std::string_view key) {
  for (const Field& f : fields()) {
    if (f.key == key) return f;
  }
  throw ConfigError("unknown key '" + std::string(key) + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw FormatError("format_number: conversion failed");
  return {buf, end};
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const Field& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  find_field(trim(key)).set(cfg, value);
}

std::string get_config_value(const ExperimentConfig& cfg, std::string_view key) {
  return find_field(trim(key)).get(cfg);
}

std::string to_text(const ExperimentConfig& cfg) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      if (!seen.insert(std::string(key)).second) throw ConfigError("duplicate key '" + std::string(key) + "'");
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::size_t ExperimentConfig::effective_iterations() const {
  if (problem == ProblemKind::mlp && epochs > 0) {
    const std::size_t per_epoch = (train_size + batch_size - 1) / batch_size;
    return epochs * per_epoch;
  }
  return iterations;
}

void ExperimentConfig::validate() const {
  try {
    optim.validate();
    if (effective_iterations() == 0) throw ConfigError("iterations must be >= 1");
    switch (problem) {
      case ProblemKind::ar: {
        ArModel m{ar_coeffs, noise, ar_horizon == 0 ? iterations + ar_coeffs.size() : ar_horizon};
        m.validate();
        break;
      }
      case ProblemKind::quadratic: {
        const std::size_t n = quad_diag.size();
        if (n == 0) throw ConfigError("quad_diag must not be empty");
        if (quad_b.size() != n || quad_theta0.size() != n) {
          throw ConfigError("quad_diag, quad_b and quad_theta0 must have equal lengths");
        }
        for (double a : quad_diag) {
          if (!(a > 0.0)) throw ConfigError("quad_diag entries must be > 0");
        }
        if (!(grad_noise_std >= 0.0)) throw ConfigError("grad_noise_std must be >= 0");
        break;
      }
      case ProblemKind::mlp: {
        if (data_dir.empty()) throw ConfigError("data_dir is required for the mlp problem");
        if (train_size == 0) throw ConfigError("train_size must be >= 1");
        if (batch_size == 0 || batch_size > train_size) {
          throw ConfigError("batch_size must be in [1, train_size]");
        }
        for (std::size_t h : hidden) {
          if (h == 0) throw ConfigError("hidden widths must be >= 1");
        }
        if (!(init_scale >= 0.0)) throw ConfigError("init_scale must be >= 0");
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace fracsed
