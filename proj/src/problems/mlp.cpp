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
#include <string>

#include "fracsed/error.hpp"
#include "fracsed/problems.hpp"

namespace fracsed {

void MlpSpec::validate() const {
  if (widths.size() < 2) throw ConfigError("MLP needs at least an input and an output width");
  for (std::size_t w : widths) {
    if (w == 0) throw ConfigError("MLP widths must be >= 1");
  }
  if (!(init_scale >= 0.0) || !std::isfinite(init_scale)) {
    throw ConfigError("MLP init scale must be finite and >= 0");
  }
}

void LabeledBatch::validate() const {
  if (inputs.size() != labels.size() * features) {
    throw DimensionError("batch: " + std::to_string(inputs.size()) + " input values for " +
                         std::to_string(labels.size()) + " rows of " + std::to_string(features));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= classes) {
      throw DomainError("batch: label " + std::to_string(labels[i]) + " at row " +
                        std::to_string(i) + " outside [0, " + std::to_string(classes) + ")");
    }
  }
}

LabeledBatch LabeledBatch::subset(std::span<const std::size_t> rows) const {
  LabeledBatch out;
  out.features = features;
  out.classes = classes;
  out.inputs.reserve(rows.size() * features);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= size()) throw DimensionError("batch subset: row " + std::to_string(r) + " out of range");
    const auto src = row(r);
    out.inputs.insert(out.inputs.end(), src.begin(), src.end());
    out.labels.push_back(labels[r]);
  }
  return out;
}

Layers mlp_init(const MlpSpec& spec, RngStream& rng) {
  spec.validate();
  Layers params(spec.layer_count());
  for (std::size_t l = 0; l < params.size(); ++l) {
    const std::size_t weights = spec.widths[l + 1] * spec.widths[l];
    params[l].assign(spec.layer_size(l), 0.0);
    for (std::size_t i = 0; i < weights; ++i) {
      params[l][i] = spec.init_scale * (2.0 * rng.uniform() - 1.0);
    }
  }
  return params;
}

namespace {

void check_params(const MlpSpec& spec, const Layers& params) {
  spec.validate();
  if (params.size() != spec.layer_count()) {
    throw DimensionError("MLP: " + std::to_string(params.size()) + " parameter layers for " +
                         std::to_string(spec.layer_count()) + " layers");
  }
  for (std::size_t l = 0; l < params.size(); ++l) {
    if (params[l].size() != spec.layer_size(l)) {
      throw DimensionError("MLP: layer " + std::to_string(l) + " has " +
                           std::to_string(params[l].size()) + " parameters, expected " +
                           std::to_string(spec.layer_size(l)));
    }
  }
}

void check_batch(const MlpSpec& spec, const LabeledBatch& batch) {
  batch.validate();
  if (batch.features != spec.widths.front()) {
    throw DimensionError("MLP: batch has " + std::to_string(batch.features) +
                         " features, input width is " + std::to_string(spec.widths.front()));
  }
  if (batch.classes != spec.widths.back()) {
    throw DimensionError("MLP: batch has " + std::to_string(batch.classes) +
                         " classes, output width is " + std::to_string(spec.widths.back()));
  }
}

double activate(Activation a, double z) {
  return a == Activation::relu ? (z > 0.0 ? z : 0.0) : std::tanh(z);
}

// Derivative expressed through the activation output h.
double activate_slope(Activation a, double h) {
  return a == Activation::relu ? (h > 0.0 ? 1.0 : 0.0) : 1.0 - h * h;
}

// Post-activation values per layer; acts[0] is the input, acts.back() the logits.
void forward(const MlpSpec& spec, const Layers& params, std::span<const double> input,
             std::vector<std::vector<double>>& acts) {
  const std::size_t layers = spec.layer_count();
  acts.resize(layers + 1);
  acts[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec.widths[l], out = spec.widths[l + 1];
    const double* w = params[l].data();
    const double* b = w + out * in;
    const auto& h = acts[l];
    auto& z = acts[l + 1];
    z.resize(out);
    const bool last = l + 1 == layers;
    for (std::size_t o = 0; o < out; ++o) {
      double v = b[o];
      const double* row = w + o * in;
      for (std::size_t i = 0; i < in; ++i) v += row[i] * h[i];
      z[o] = last ? v : activate(spec.activation, v);
    }
  }
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::vector<double> mlp_logits(const MlpSpec& spec, const Layers& params,
                               std::span<const double> input) {
  check_params(spec, params);
  if (input.size() != spec.widths.front()) throw DimensionError("mlp_logits: input width mismatch");
  std::vector<std::vector<double>> acts;
  forward(spec, params, input, acts);
  return acts.back();
}

MlpLossGrad mlp_loss_grad(const MlpSpec& spec, const Layers& params, const LabeledBatch& batch) {
  check_params(spec, params);
  check_batch(spec, batch);
  if (batch.size() == 0) throw DimensionError("mlp_loss_grad: empty batch");

  const std::size_t layers = spec.layer_count();
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  MlpLossGrad out;
  out.grads.resize(layers);
  for (std::size_t l = 0; l < layers; ++l) out.grads[l].assign(params[l].size(), 0.0);

  std::vector<std::vector<double>> acts;
  std::vector<double> delta, prev_delta;
  for (std::size_t n = 0; n < batch.size(); ++n) {
    forward(spec, params, batch.row(n), acts);
    const auto& logits = acts.back();
    const std::size_t label = batch.labels[n];
    const double top = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - top);
    const double lse = top + std::log(sum);
    out.loss += (lse - logits[label]) * inv_n;
    if (argmax(logits) == label) ++out.correct;

    delta.resize(logits.size());
    for (std::size_t c = 0; c < logits.size(); ++c) {
      delta[c] = (std::exp(logits[c] - lse) - (c == label ? 1.0 : 0.0)) * inv_n;
    }
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = spec.widths[l], outw = spec.widths[l + 1];
      const auto& h = acts[l];
      double* gw = out.grads[l].data();
      double* gb = gw + outw * in;
      for (std::size_t o = 0; o < outw; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        double* row = gw + o * in;
        for (std::size_t i = 0; i < in; ++i) row[i] += d * h[i];
        gb[o] += d;
      }
      if (l == 0) break;
      const double* w = params[l].data();
      prev_delta.assign(in, 0.0);
      for (std::size_t o = 0; o < outw; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* row = w + o * in;
        for (std::size_t i = 0; i < in; ++i) prev_delta[i] += row[i] * d;
      }
      for (std::size_t i = 0; i < in; ++i) {
        prev_delta[i] *= activate_slope(spec.activation, h[i]);
      }
      delta.swap(prev_delta);
    }
  }
  return out;
}

double mlp_accuracy(const MlpSpec& spec, const Layers& params, const LabeledBatch& data) {
  check_params(spec, params);
  check_batch(spec, data);
  if (data.size() == 0) throw DimensionError("mlp_accuracy: empty data");
  std::vector<std::vector<double>> acts;
  std::size_t hits = 0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    forward(spec, params, data.row(n), acts);
    if (argmax(acts.back()) == data.labels[n]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace fracsed
