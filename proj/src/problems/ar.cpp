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

void ArModel::validate() const {
  if (coeffs.empty()) throw ConfigError("AR model: order must be >= 1");
  for (double a : coeffs) {
    if (!std::isfinite(a)) throw ConfigError("AR model: non-finite coefficient");
  }
  if (horizon <= coeffs.size()) {
    throw ConfigError("AR model: horizon " + std::to_string(horizon) +
                      " must exceed the order " + std::to_string(coeffs.size()));
  }
  noise.validate();
}

std::vector<double> ar_simulate(const ArModel& model, RngStream& rng,
                                std::span<const double> initial) {
  model.validate();
  const std::size_t p = model.order();
  if (!initial.empty() && initial.size() != p) {
    throw DimensionError("ar_simulate: " + std::to_string(initial.size()) +
                         " initial values for order " + std::to_string(p));
  }
  std::vector<double> y(model.horizon, 0.0);
  for (std::size_t i = 0; i < initial.size(); ++i) y[i] = initial[i];
  for (std::size_t k = p; k < y.size(); ++k) {
    double v = model.noise.draw(rng);
    for (std::size_t i = 0; i < p; ++i) v += model.coeffs[i] * y[k - 1 - i];
    if (!std::isfinite(v)) {
      throw NumericalError("ar_simulate: sequence became non-finite at index " + std::to_string(k),
                           v);
    }
    y[k] = v;
  }
  return y;
}

std::vector<Regressor> ar_regressors(std::span<const double> y, std::size_t order) {
  if (order == 0 || y.size() <= order) {
    throw DimensionError("ar_regressors: need more than " + std::to_string(order) + " samples");
  }
  std::vector<Regressor> out;
  out.reserve(y.size() - order);
  for (std::size_t k = order; k < y.size(); ++k) {
    Regressor r;
    r.phi.resize(order);
    for (std::size_t i = 0; i < order; ++i) r.phi[i] = y[k - 1 - i];
    r.target = y[k];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Regressor> ar_generate(const ArModel& model, RngStream& rng) {
  const auto y = ar_simulate(model, rng);
  return ar_regressors(y, model.order());
}

LossGrad ar_loss_grad(std::span<const double> theta, const Regressor& r) {
  if (theta.size() != r.phi.size()) {
    throw DimensionError("ar_loss_grad: theta has " + std::to_string(theta.size()) +
                         " entries, regressor " + std::to_string(r.phi.size()));
  }
  double pred = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) pred += r.phi[i] * theta[i];
  const double e = r.target - pred;
  LossGrad out;
  out.loss = 0.5 * e * e;
  out.grad.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out.grad[i] = -e * r.phi[i];
  return out;
}

double ar_mean_loss(std::span<const double> theta, const std::vector<Regressor>& data) {
  if (data.empty()) throw DimensionError("ar_mean_loss: empty data");
  double sum = 0.0;
  for (const Regressor& r : data) {
    if (r.phi.size() != theta.size()) throw DimensionError("ar_mean_loss: order mismatch");
    double pred = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) pred += r.phi[i] * theta[i];
    const double e = r.target - pred;
    sum += 0.5 * e * e;
  }
  return sum / static_cast<double>(data.size());
}

std::vector<double> ar_least_squares(const std::vector<Regressor>& data) {
  if (data.empty()) throw DimensionError("ar_least_squares: empty data");
  const std::size_t p = data.front().phi.size();
  // Augmented normal equations [X^T X | X^T y], solved with partial pivoting.
  std::vector<double> m(p * (p + 1), 0.0);
  for (const Regressor& r : data) {
    if (r.phi.size() != p) throw DimensionError("ar_least_squares: order mismatch");
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) m[i * (p + 1) + j] += r.phi[i] * r.phi[j];
      m[i * (p + 1) + p] += r.phi[i] * r.target;
    }
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < p; ++i) scale = std::max(scale, std::abs(m[i * (p + 1) + i]));
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r) {
      if (std::abs(m[r * (p + 1) + c]) > std::abs(m[piv * (p + 1) + c])) piv = r;
    }
    const double pv = m[piv * (p + 1) + c];
    if (!(std::abs(pv) > 1e-14 * scale) || scale == 0.0) {
      throw NumericalError("ar_least_squares: singular normal equations", pv);
    }
    if (piv != c) {
      for (std::size_t k = 0; k <= p; ++k) std::swap(m[c * (p + 1) + k], m[piv * (p + 1) + k]);
    }
    for (std::size_t r = c + 1; r < p; ++r) {
      const double f = m[r * (p + 1) + c] / pv;
      for (std::size_t k = c; k <= p; ++k) m[r * (p + 1) + k] -= f * m[c * (p + 1) + k];
    }
  }
  std::vector<double> x(p);
  for (std::size_t i = p; i-- > 0;) {
    double v = m[i * (p + 1) + p];
    for (std::size_t k = i + 1; k < p; ++k) v -= m[i * (p + 1) + k] * x[k];
    x[i] = v / m[i * (p + 1) + i];
  }
  return x;
}

}  // namespace fracsed
