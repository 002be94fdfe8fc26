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

#ifndef FRACSED_FISHER_HPP
#define FRACSED_FISHER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fracsed/mathkit.hpp"

namespace fracsed {

enum class FisherMode { full, diagonal };

/// Layers wider than this fall back to the diagonal approximation.
inline constexpr std::size_t kDefaultDiagonalThreshold = 512;

FisherMode fisher_mode_for(std::size_t dim, std::size_t diagonal_threshold = kDefaultDiagonalThreshold);

/// One layer's loss gradient.
struct GradientSample {
  std::size_t layer_index = 0;
  std::span<const double> values;
};

/// A Fisher estimate in either storage mode. In diagonal mode `diag` holds the
/// diagonal and `full` is empty.
class FisherMatrix {
 public:
  explicit FisherMatrix(SymMatrix full);
  explicit FisherMatrix(std::vector<double> diag);

  FisherMode mode() const noexcept { return mode_; }
  std::size_t dim() const noexcept;
  const SymMatrix& full() const;
  const std::vector<double>& diag() const;

  double trace() const noexcept;
  /// Eigenvalues sorted non-increasing (the diagonal itself in diagonal mode).
  std::vector<double> eigenvalues() const;

 private:
  friend class FisherBlock;

  FisherMode mode_;
  std::optional<SymMatrix> full_;
  std::vector<double> diag_;
};

/// Per-layer exponential moving average of gradient outer products:
///   F <- (1 - decay) F + decay g g^T
/// weight_mass tracks 1 - (1 - decay)^t, the total EMA weight seen so far.
class FisherBlock {
 public:
  FisherBlock(std::size_t layer_index, std::size_t dim, double decay, FisherMode mode);

  std::size_t layer_index() const noexcept { return layer_index_; }
  std::size_t dim() const noexcept { return estimate_.dim(); }
  FisherMode mode() const noexcept { return estimate_.mode(); }
  double decay() const noexcept { return decay_; }
  double weight_mass() const noexcept { return weight_mass_; }
  std::size_t updates() const noexcept { return updates_; }

  /// Throws DimensionError on layer or length mismatch, DomainError on
  /// non-finite gradient entries.
  void update(const GradientSample& g);

  double trace() const noexcept { return estimate_.trace(); }
  const FisherMatrix& raw() const noexcept { return estimate_; }

  /// Trace-normalized copy: (nominal_dim / trace) F, or zero when
  /// trace <= kZeroTrace.
  FisherMatrix normalize(std::size_t nominal_dim) const;

 private:
  std::size_t layer_index_;
  double decay_;
  double weight_mass_ = 0.0;
  std::size_t updates_ = 0;
  FisherMatrix estimate_;
};

inline constexpr double kZeroTrace = 1e-12;

/// Value-semantics form of FisherBlock::update.
FisherBlock ema_update(FisherBlock block, const GradientSample& g);

}  // namespace fracsed

#endif  // FRACSED_FISHER_HPP
