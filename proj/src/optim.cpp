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

#include "fracsed/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracsed/error.hpp"
#include "fracsed/mathkit.hpp"

namespace fracsed {

namespace {

// Minimum of the gamma function on (0, inf).
constexpr double kGammaArgMin = 1.4616321449683623;

void require_shapes(const Layers& layers, const Layers& grads, const char* who) {
  if (layers.size() != grads.size()) {
    throw DimensionError(std::string(who) + ": " + std::to_string(grads.size()) +
                         " gradient layers for " + std::to_string(layers.size()) +
                         " parameter layers");
  }
  for (std::size_t j = 0; j < layers.size(); ++j) {
    if (layers[j].size() != grads[j].size()) {
      throw DimensionError(std::string(who) + ": layer " + std::to_string(j) +
                           " has " + std::to_string(layers[j].size()) +
                           " parameters but gradient length " +
                           std::to_string(grads[j].size()));
    }
  }
}

void require_finite(const Layers& layers, std::size_t step, const char* what) {
  for (std::size_t j = 0; j < layers.size(); ++j) {
    for (double v : layers[j]) {
      if (!std::isfinite(v)) {
        throw DivergenceError(std::string(what) + " is non-finite in layer " +
                                  std::to_string(j) + " at step " + std::to_string(step),
                              step);
      }
    }
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double delta_norm(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

void reset(StepDiagnostics& d, std::size_t layers) {
  d.gamma_denominator.assign(layers, 1.0);
  d.min_effective_step.assign(layers, 0.0);
  d.max_effective_step.assign(layers, 0.0);
  d.delta_norm.assign(layers, 0.0);
}

}  // namespace

ParamState ParamState::initial(Layers theta0) {
  ParamState s;
  s.prev_layers = theta0;
  s.layers = std::move(theta0);
  return s;
}

void OptimConfig::validate() const {
  if (!(mu0 > 0.0) || !std::isfinite(mu0)) {
    throw ConfigError("mu0 must be finite and > 0, got " + std::to_string(mu0));
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError("delta must be finite and > 0, got " + std::to_string(delta));
  }
  if (grad_clip && !(*grad_clip > 0.0)) {
    throw ConfigError("grad_clip must be > 0, got " + std::to_string(*grad_clip));
  }
  if (!(fisher_decay > 0.0 && fisher_decay <= 1.0)) {
    throw ConfigError("fisher_decay must be in (0, 1], got " + std::to_string(fisher_decay));
  }
  sed.validate();
}

double step_size(std::size_t t, double mu0) {
  if (t < 1) throw DomainError("step_size: t must be >= 1");
  return mu0 / std::sqrt(static_cast<double>(t));
}

void clip_gradients(Layers& grads, double bound) {
  for (auto& g : grads) {
    const double n = norm2(g);
    if (n > bound) {
      const double s = bound / n;
      for (double& x : g) x *= s;
    }
  }
}

std::vector<double> layer_delta_norms(const ParamState& state) {
  std::vector<double> out(state.layers.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = delta_norm(state.layers[j], state.prev_layers[j]);
  }
  return out;
}

ParamState sgd_step(const ParamState& state, const Layers& grads, double mu,
                    StepDiagnostics* diagnostics) {
  require_shapes(state.layers, grads, "sgd_step");
  require_finite(grads, state.step_index, "gradient");
  ParamState next;
  next.prev_layers = state.layers;
  next.layers = state.layers;
  next.step_index = state.step_index + 1;
  for (std::size_t j = 0; j < grads.size(); ++j) {
    auto& theta = next.layers[j];
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = theta[i] - mu * grads[j][i];
  }
  require_finite(next.layers, state.step_index, "update");
  if (diagnostics) {
    reset(*diagnostics, grads.size());
    for (std::size_t j = 0; j < grads.size(); ++j) {
      diagnostics->min_effective_step[j] = mu;
      diagnostics->max_effective_step[j] = mu;
      diagnostics->delta_norm[j] = delta_norm(next.layers[j], next.prev_layers[j]);
    }
  }
  return next;
}

ParamState fosgd_step(const ParamState& state, const Layers& grads, double mu,
                      const AlphaState& alpha, const OptimConfig& cfg,
                      StepDiagnostics* diagnostics) {
  require_shapes(state.layers, grads, "fosgd_step");
  if (state.step_index < 1) {
    throw DomainError("fosgd_step: needs one classical step first (step_index >= 1)");
  }
  if (alpha.per_layer_alpha.size() != grads.size()) {
    throw DimensionError("fosgd_step: " + std::to_string(alpha.per_layer_alpha.size()) +
                         " exponents for " + std::to_string(grads.size()) + " layers");
  }
  require_finite(grads, state.step_index, "gradient");

  ParamState next;
  next.prev_layers = state.layers;
  next.layers = state.layers;
  next.step_index = state.step_index + 1;
  if (diagnostics) reset(*diagnostics, grads.size());

  for (std::size_t j = 0; j < grads.size(); ++j) {
    const double a = alpha.per_layer_alpha[j];
    if (!(a > 0.0 && a <= 1.0)) {
      throw DomainError("fosgd_step: alpha must be in (0, 1], got " + std::to_string(a));
    }
    const double denom = gamma(2.0 - a);
    const double exponent = 1.0 - a;
    const auto& theta = state.layers[j];
    const auto& prev = state.prev_layers[j];
    const auto& g = grads[j];
    auto& out = next.layers[j];
    double lo = 0.0, hi = 0.0;
    if (cfg.scaling == ScalingMode::layer_norm) {
      const double factor = std::pow(delta_norm(theta, prev) + cfg.delta, exponent);
      const double coef = mu * factor / denom;
      for (std::size_t i = 0; i < theta.size(); ++i) out[i] = theta[i] - coef * g[i];
      lo = hi = coef;
    } else {
      lo = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < theta.size(); ++i) {
        const double factor = std::pow(std::abs(theta[i] - prev[i]) + cfg.delta, exponent);
        const double coef = mu * factor / denom;
        out[i] = theta[i] - coef * g[i];
        lo = std::min(lo, coef);
        hi = std::max(hi, coef);
      }
    }
    if (diagnostics) {
      diagnostics->gamma_denominator[j] = denom;
      diagnostics->min_effective_step[j] = lo;
      diagnostics->max_effective_step[j] = hi;
      diagnostics->delta_norm[j] = delta_norm(out, theta);
    }
  }
  require_finite(next.layers, state.step_index, "update");
  return next;
}

std::vector<FisherBlock> make_fisher_blocks(const Layers& layers, const OptimConfig& cfg) {
  std::vector<FisherBlock> blocks;
  blocks.reserve(layers.size());
  for (std::size_t j = 0; j < layers.size(); ++j) {
    blocks.emplace_back(j, layers[j].size(), cfg.fisher_decay,
                        fisher_mode_for(layers[j].size(), cfg.diagonal_threshold));
  }
  return blocks;
}

namespace {
std::vector<FisherBlock> staged_update(const std::vector<FisherBlock>& blocks,
                                       const Layers& grads, std::size_t step) {
  if (blocks.size() != grads.size()) {
    throw DimensionError("Fisher update: " + std::to_string(blocks.size()) + " blocks for " +
                         std::to_string(grads.size()) + " gradient layers");
  }
  std::vector<FisherBlock> staged = blocks;
  for (std::size_t j = 0; j < staged.size(); ++j) {
    staged[j].update({j, grads[j]});
    if (!std::isfinite(staged[j].trace())) {
      throw DivergenceError("Fisher estimate overflowed in layer " + std::to_string(j) +
                                " at step " + std::to_string(step),
                            step);
    }
  }
  return staged;
}
}  // namespace

TwoSedStep twosed_fosgd_step(const ParamState& state, const Layers& grads,
                             std::vector<FisherBlock>& blocks, const SedEstimate& sed,
                             const OptimConfig& cfg) {
  if (state.step_index < 1) {
    throw DomainError("twosed_fosgd_step: needs one classical step first (step_index >= 1)");
  }
  require_shapes(state.layers, grads, "twosed_fosgd_step");
  require_finite(grads, state.step_index, "gradient");

  std::vector<FisherBlock> staged = staged_update(blocks, grads, state.step_index);
  TwoSedStep out;
  out.sed = observe(sed, staged, cfg.sed);
  out.alpha = adapt_alpha(out.sed, cfg.sed);
  out.mu = step_size(state.step_index, cfg.mu0);
  out.state = fosgd_step(state, grads, out.mu, out.alpha, cfg, &out.diagnostics);
  blocks = std::move(staged);
  return out;
}

double gamma_floor(double alpha_lo, double alpha_hi) {
  const double x_lo = 2.0 - alpha_hi;
  const double x_hi = 2.0 - alpha_lo;
  if (x_lo <= kGammaArgMin && kGammaArgMin <= x_hi) return gamma(kGammaArgMin);
  return std::min(gamma(x_lo), gamma(x_hi));
}

double iterate_bound(double mu0, double delta, double grad_bound, double alpha_lo,
                     double alpha_hi) {
  if (!(alpha_lo > 0.0 && alpha_lo <= alpha_hi && alpha_hi <= 1.0)) {
    throw DomainError("iterate_bound: need 0 < alpha_lo <= alpha_hi <= 1");
  }
  const double c_gamma = gamma_floor(alpha_lo, alpha_hi);
  const double first = mu0 * grad_bound;
  auto factor = [&](double r) {
    return std::max(std::pow(delta + r, 1.0 - alpha_lo), std::pow(delta + r, 1.0 - alpha_hi));
  };
  // The map is increasing and sublinear in r, so iteration from mu0 G climbs
  // monotonically to the fixed point.
  double r = first;
  for (int k = 0; k < 100000; ++k) {
    const double next = std::max(first, first * factor(r) / c_gamma);
    if (std::abs(next - r) <= 1e-15 * std::max(1.0, next)) {
      r = next;
      break;
    }
    r = next;
  }
  return r;
}

bool bounded_iterate_check(const std::vector<ParamState>& trajectory, const OptimConfig& cfg,
                           double grad_bound) {
  return bounded_iterate_check(trajectory, cfg, grad_bound, cfg.sed.alpha_min, cfg.sed.alpha0);
}

bool bounded_iterate_check(const std::vector<ParamState>& trajectory, const OptimConfig& cfg,
                           double grad_bound, double alpha_lo, double alpha_hi) {
  const double bound = iterate_bound(cfg.mu0, cfg.delta, grad_bound, alpha_lo, alpha_hi);
  for (const ParamState& s : trajectory) {
    for (double n : layer_delta_norms(s)) {
      if (!(n <= bound)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Optimizer

Optimizer::Optimizer(OptimizerKind kind, OptimConfig cfg, Layers theta0, bool track_sed)
    : kind_(kind),
      cfg_(std::move(cfg)),
      track_sed_(track_sed || kind == OptimizerKind::twosed),
      state_(ParamState::initial(std::move(theta0))) {
  cfg_.validate();
  if (state_.layers.empty()) throw DimensionError("Optimizer: at least one layer required");
  if (track_sed_) blocks_ = make_fisher_blocks(state_.layers, cfg_);
}

StepReport Optimizer::step(Layers grads) {
  const std::size_t t = state_.step_index;
  const std::size_t layers = state_.layers.size();
  require_shapes(state_.layers, grads, "Optimizer::step");
  require_finite(grads, t, "gradient");
  if (cfg_.grad_clip) clip_gradients(grads, *cfg_.grad_clip);

  StepReport report;
  report.t = t;
  report.d_zeta.assign(layers, 0.0);
  report.lower_2sed.assign(layers, 0.0);

  if (t == 0) {
    report.mu = cfg_.mu0;
    report.alpha.assign(layers, 1.0);
    state_ = sgd_step(state_, grads, cfg_.mu0, &report.diagnostics);
    report.d_max = sed_.d_max_running;
    return report;
  }

  switch (kind_) {
    case OptimizerKind::sgd: {
      report.mu = step_size(t, cfg_.mu0);
      report.alpha.assign(layers, 1.0);
      ParamState next = sgd_step(state_, grads, report.mu, &report.diagnostics);
      if (track_sed_) {
        auto staged = staged_update(blocks_, grads, t);
        sed_ = observe(sed_, staged, cfg_.sed);
        blocks_ = std::move(staged);
      }
      state_ = std::move(next);
      break;
    }
    case OptimizerKind::fosgd: {
      report.mu = step_size(t, cfg_.mu0);
      const AlphaState alpha = AlphaState::uniform(layers, cfg_.sed.alpha0);
      report.alpha = alpha.per_layer_alpha;
      ParamState next = fosgd_step(state_, grads, report.mu, alpha, cfg_, &report.diagnostics);
      if (track_sed_) {
        auto staged = staged_update(blocks_, grads, t);
        sed_ = observe(sed_, staged, cfg_.sed);
        blocks_ = std::move(staged);
      }
      state_ = std::move(next);
      break;
    }
    case OptimizerKind::twosed: {
      TwoSedStep out = twosed_fosgd_step(state_, grads, blocks_, sed_, cfg_);
      report.mu = out.mu;
      report.alpha = std::move(out.alpha.per_layer_alpha);
      report.diagnostics = std::move(out.diagnostics);
      state_ = std::move(out.state);
      sed_ = std::move(out.sed);
      break;
    }
  }
  if (track_sed_) {
    report.d_zeta = sed_.per_layer;
    report.lower_2sed = sed_.lower_cumulative;
  }
  report.d_max = sed_.d_max_running;
  return report;
}

}  // namespace fracsed
