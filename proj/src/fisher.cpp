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

#include "fracsed/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracsed/error.hpp"

namespace fracsed {

FisherMode fisher_mode_for(std::size_t dim, std::size_t diagonal_threshold) {
  return dim > diagonal_threshold ? FisherMode::diagonal : FisherMode::full;
}

FisherMatrix::FisherMatrix(SymMatrix full) : mode_(FisherMode::full), full_(std::move(full)) {}

FisherMatrix::FisherMatrix(std::vector<double> diag)
    : mode_(FisherMode::diagonal), diag_(std::move(diag)) {
  if (diag_.empty()) throw DimensionError("FisherMatrix: dimension must be >= 1");
}

std::size_t FisherMatrix::dim() const noexcept {
  return mode_ == FisherMode::full ? full_->dim() : diag_.size();
}

const SymMatrix& FisherMatrix::full() const {
  if (mode_ != FisherMode::full) throw Error(ErrorCode::domain, "FisherMatrix: not in full mode");
  return *full_;
}

const std::vector<double>& FisherMatrix::diag() const {
  if (mode_ != FisherMode::diagonal) {
    throw Error(ErrorCode::domain, "FisherMatrix: not in diagonal mode");
  }
  return diag_;
}

double FisherMatrix::trace() const noexcept {
  if (mode_ == FisherMode::full) return full_->trace();
  double t = 0.0;
  for (double v : diag_) t += v;
  return t;
}

std::vector<double> FisherMatrix::eigenvalues() const {
  if (mode_ == FisherMode::full) return eigenvalues_sym(*full_);
  std::vector<double> values = diag_;
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

namespace {
FisherMatrix zero_matrix(FisherMode mode, std::size_t dim) {
  if (mode == FisherMode::full) return FisherMatrix(SymMatrix(dim));
  return FisherMatrix(std::vector<double>(dim, 0.0));
}
}  // namespace

FisherBlock::FisherBlock(std::size_t layer_index, std::size_t dim, double decay,
                         FisherMode mode)
    : layer_index_(layer_index), decay_(decay), estimate_(zero_matrix(mode, dim)) {
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw DomainError("FisherBlock: decay must be in (0, 1], got " + std::to_string(decay));
  }
}

void FisherBlock::update(const GradientSample& g) {
  if (g.layer_index != layer_index_) {
    throw DimensionError("FisherBlock::update: gradient for layer " +
                         std::to_string(g.layer_index) + " given to block " +
                         std::to_string(layer_index_));
  }
  if (g.values.size() != dim()) {
    throw DimensionError("FisherBlock::update: gradient length " +
                         std::to_string(g.values.size()) + " != block dim " +
                         std::to_string(dim()));
  }
  for (double v : g.values) {
    if (!std::isfinite(v)) throw DomainError("FisherBlock::update: non-finite gradient entry");
  }
  const double keep = 1.0 - decay_;
  if (estimate_.mode() == FisherMode::full) {
    estimate_.full_->scale_add_outer(keep, decay_, g.values);
  } else {
    auto& d = estimate_.diag_;
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = keep * d[i] + decay_ * g.values[i] * g.values[i];
    }
  }
  weight_mass_ = keep * weight_mass_ + decay_;
  ++updates_;
}

FisherMatrix FisherBlock::normalize(std::size_t nominal_dim) const {
  if (nominal_dim != dim()) {
    throw DimensionError("FisherBlock::normalize: nominal dim " + std::to_string(nominal_dim) +
                         " != block dim " + std::to_string(dim()));
  }
  const double tr = trace();
  if (!(tr > kZeroTrace)) return zero_matrix(estimate_.mode(), dim());
  const double factor = static_cast<double>(nominal_dim) / tr;
  if (estimate_.mode() == FisherMode::full) {
    SymMatrix m = estimate_.full();
    m.scale(factor);
    return FisherMatrix(std::move(m));
  }
  std::vector<double> d = estimate_.diag();
  for (double& v : d) v *= factor;
  return FisherMatrix(std::move(d));
}

FisherBlock ema_update(FisherBlock block, const GradientSample& g) {
  block.update(g);
  return block;
}

}  // namespace fracsed
