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

#ifndef FRACSED_SED_HPP
#define FRACSED_SED_HPP

#include <cstddef>
#include <vector>

#include "fracsed/fisher.hpp"

namespace fracsed {

/// Which Fisher estimate feeds the curvature term.
enum class FisherSource { normalized, raw };

struct SedConfig {
  double zeta = 0.7;
  double epsilon = 0.01;
  double alpha0 = 0.98;
  double beta = 0.01;
  double alpha_min = 0.05;
  FisherSource source = FisherSource::normalized;

  /// Throws ConfigError when any field is outside its domain. beta == 0 is
  /// accepted and disables adaptation.
  void validate() const;

  /// epsilon^(zeta - 1), always > 1 for a valid config.
  double curvature_scale() const;
};

/// Two-scale effective dimension state across layers.
struct SedEstimate {
  std::vector<double> per_layer;         // d_zeta for each layer at the current step
  std::vector<double> lower_cumulative;  // layer-wise cumulative (lower) 2SED
  double d_max_running = 0.0;            // max over layers and all steps so far
};

struct AlphaState {
  std::vector<double> per_layer_alpha;

  static AlphaState uniform(std::size_t layers, double alpha) {
    return AlphaState{std::vector<double>(layers, alpha)};
  }
};

/// Curvature dimension: log det(I + c F^{1/2}) / |log c| with c = epsilon^(zeta-1).
double d_curv(const FisherMatrix& fisher, const SedConfig& cfg);

/// zeta * d + (1 - zeta) * d_curv.
double two_sed(const FisherMatrix& fisher, std::size_t d_nominal, const SedConfig& cfg);

/// prev + (1 - zeta) log det(I + c F^{1/2}) / |log epsilon|.
double lower_2sed_accumulate(double prev, const FisherMatrix& layer_fisher, std::size_t d_j,
                             const SedConfig& cfg);

/// alpha_j = clamp(alpha0 - beta * d_j / d_max, alpha_min, alpha0); alpha0 for
/// every layer until a positive d_max has been observed.
AlphaState adapt_alpha(const SedEstimate& sed, const SedConfig& cfg);

/// d_max <- max(d_max, max_j per_layer[j]).
SedEstimate update_dmax(SedEstimate sed);

/// Worst-case 2SED for a layer whose gradients never exceed `grad_bound` in
/// norm: zeta d + (1 - zeta) d log(1 + c G) / |log c|.
double two_sed_upper_bound(std::size_t d_j, double grad_bound, const SedConfig& cfg);

/// Selects the estimate that feeds d_curv for this block (normalized or raw).
FisherMatrix sed_input(const FisherBlock& block, const SedConfig& cfg);

/// Recomputes per-layer 2SED, the lower 2SED partial sums and the running
/// maximum from the current Fisher blocks.
SedEstimate observe(const SedEstimate& prev, const std::vector<FisherBlock>& blocks,
                    const SedConfig& cfg);

}  // namespace fracsed

#endif  // FRACSED_SED_HPP
