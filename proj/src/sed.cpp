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

#include "fracsed/sed.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracsed/error.hpp"

namespace fracsed {

void SedConfig::validate() const {
  if (!(zeta >= 2.0 / 3.0 && zeta < 1.0)) {
    throw ConfigError("zeta must be in [2/3, 1), got " + std::to_string(zeta));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("epsilon must be in (0, 1), got " + std::to_string(epsilon));
  }
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) {
    throw ConfigError("alpha0 must be in (0, 1], got " + std::to_string(alpha0));
  }
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be finite and >= 0, got " + std::to_string(beta));
  }
  if (!(alpha_min > 0.0 && alpha_min <= alpha0)) {
    throw ConfigError("alpha_min must be in (0, alpha0], got " + std::to_string(alpha_min));
  }
}

double SedConfig::curvature_scale() const { return std::pow(epsilon, zeta - 1.0); }

namespace {
double logdet_term(const FisherMatrix& fisher, double scale) {
  if (fisher.mode() == FisherMode::diagonal) return logdet_plus_diagonal(fisher.diag(), scale);
  return logdet_plus(fisher.full(), scale);
}
}  // namespace

double d_curv(const FisherMatrix& fisher, const SedConfig& cfg) {
  const double c = cfg.curvature_scale();
  return logdet_term(fisher, c) / std::abs(std::log(c));
}

double two_sed(const FisherMatrix& fisher, std::size_t d_nominal, const SedConfig& cfg) {
  if (d_nominal == 0) throw DimensionError("two_sed: nominal dimension must be >= 1");
  return cfg.zeta * static_cast<double>(d_nominal) + (1.0 - cfg.zeta) * d_curv(fisher, cfg);
}

double lower_2sed_accumulate(double prev, const FisherMatrix& layer_fisher, std::size_t d_j,
                             const SedConfig& cfg) {
  if (d_j != layer_fisher.dim()) {
    throw DimensionError("lower_2sed_accumulate: layer dim " + std::to_string(d_j) +
                         " != Fisher dim " + std::to_string(layer_fisher.dim()));
  }
  const double c = cfg.curvature_scale();
  return prev + (1.0 - cfg.zeta) * logdet_term(layer_fisher, c) / std::abs(std::log(cfg.epsilon));
}

AlphaState adapt_alpha(const SedEstimate& sed, const SedConfig& cfg) {
  AlphaState out = AlphaState::uniform(sed.per_layer.size(), cfg.alpha0);
  if (!(sed.d_max_running > 0.0)) return out;
  for (std::size_t j = 0; j < sed.per_layer.size(); ++j) {
    const double a = cfg.alpha0 - cfg.beta * sed.per_layer[j] / sed.d_max_running;
    out.per_layer_alpha[j] = std::clamp(a, cfg.alpha_min, cfg.alpha0);
  }
  return out;
}

SedEstimate update_dmax(SedEstimate sed) {
  for (double d : sed.per_layer) sed.d_max_running = std::max(sed.d_max_running, d);
  return sed;
}

double two_sed_upper_bound(std::size_t d_j, double grad_bound, const SedConfig& cfg) {
  const double c = cfg.curvature_scale();
  const double d = static_cast<double>(d_j);
  return cfg.zeta * d + (1.0 - cfg.zeta) * d * std::log1p(c * grad_bound) / std::abs(std::log(c));
}

FisherMatrix sed_input(const FisherBlock& block, const SedConfig& cfg) {
  if (cfg.source == FisherSource::raw) return block.raw();
  return block.normalize(block.dim());
}

SedEstimate observe(const SedEstimate& prev, const std::vector<FisherBlock>& blocks,
                    const SedConfig& cfg) {
  SedEstimate next;
  next.d_max_running = prev.d_max_running;
  next.per_layer.reserve(blocks.size());
  next.lower_cumulative.reserve(blocks.size());
  double cumulative = 0.0;
  for (const FisherBlock& block : blocks) {
    const FisherMatrix input = sed_input(block, cfg);
    const double c = cfg.curvature_scale();
    // One spectrum serves both the 2SED and the lower-2SED increment.
    const double logdet = input.mode() == FisherMode::diagonal
                              ? logdet_plus_diagonal(input.diag(), c)
                              : logdet_plus(input.full(), c);
    const double d = static_cast<double>(block.dim());
    next.per_layer.push_back(cfg.zeta * d + (1.0 - cfg.zeta) * (logdet / std::abs(std::log(c))));
    cumulative += (1.0 - cfg.zeta) * logdet / std::abs(std::log(cfg.epsilon));
    next.lower_cumulative.push_back(cumulative);
  }
  return update_dmax(std::move(next));
}

}  // namespace fracsed
