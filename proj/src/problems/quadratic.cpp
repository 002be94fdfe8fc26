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

LossGrad quadratic_loss_grad(std::span<const double> theta, const SymMatrix& a,
                             std::span<const double> b) {
  const std::size_t n = a.dim();
  if (theta.size() != n || b.size() != n) {
    throw DimensionError("quadratic_loss_grad: A is " + std::to_string(n) + "x" +
                         std::to_string(n) + ", theta has " + std::to_string(theta.size()) +
                         ", b has " + std::to_string(b.size()));
  }
  LossGrad out;
  out.grad.assign(n, 0.0);
  double quad = 0.0, lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ai = 0.0;
    for (std::size_t j = 0; j < n; ++j) ai += a(i, j) * theta[j];
    quad += theta[i] * ai;
    lin += b[i] * theta[i];
    out.grad[i] = ai - b[i];
  }
  out.loss = 0.5 * quad - lin;
  return out;
}

double quadratic_minimum(const SymMatrix& a, std::span<const double> b) {
  const std::size_t n = a.dim();
  if (b.size() != n) throw DimensionError("quadratic_minimum: b length mismatch");
  const Spectrum s = eig_sym(a);
  double lmax = 0.0;
  for (double v : s.values) lmax = std::max(lmax, std::abs(v));
  double value = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (s.values[k] < -kPsdTolerance * std::max(1.0, lmax)) {
      throw PsdError("quadratic_minimum: A is not PSD", s.values[k]);
    }
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += s.vector(i, k) * b[i];
    if (s.values[k] <= 1e-12 * std::max(1.0, lmax)) {
      if (std::abs(proj) > 1e-12) throw DomainError("quadratic_minimum: objective is unbounded");
      continue;
    }
    value -= 0.5 * proj * proj / s.values[k];
  }
  return value;
}

}  // namespace fracsed
