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

#ifndef FRACSED_OPTIM_HPP
#define FRACSED_OPTIM_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "fracsed/fisher.hpp"
#include "fracsed/sed.hpp"

namespace fracsed {

/// Parameters partitioned by layer.
using Layers = std::vector<std::vector<double>>;

/// Current and previous iterate, layer by layer. step_index counts accepted
/// steps; the first fractional step needs step_index >= 1.
struct ParamState {
  Layers layers;
  Layers prev_layers;
  std::size_t step_index = 0;

  /// theta_0 with prev == current and step_index 0.
  static ParamState initial(Layers theta0);
  std::size_t layer_count() const noexcept { return layers.size(); }
};

enum class ScalingMode {
  elementwise,  // (|theta_t - theta_{t-1}| + delta)^(1 - alpha) per coordinate
  layer_norm,   // (||theta_t - theta_{t-1}|| + delta)^(1 - alpha) per layer
};

struct OptimConfig {
  double mu0 = 0.01;
  double delta = 1e-6;
  SedConfig sed;
  ScalingMode scaling = ScalingMode::elementwise;
  std::optional<double> grad_clip;
  double fisher_decay = 0.1;
  std::size_t diagonal_threshold = kDefaultDiagonalThreshold;

  void validate() const;
};

/// mu0 / sqrt(t), t >= 1.
double step_size(std::size_t t, double mu0);

/// What one step actually applied, per layer.
struct StepDiagnostics {
  std::vector<double> gamma_denominator;  // Gamma(2 - alpha_j)
  std::vector<double> min_effective_step; // min over coordinates of mu * factor / Gamma
  std::vector<double> max_effective_step;
  std::vector<double> delta_norm;         // ||theta_{t+1} - theta_t|| after the step
};

/// Rescales each layer's gradient to norm <= bound.
void clip_gradients(Layers& grads, double bound);

/// Per-layer ||theta_t - theta_{t-1}||.
std::vector<double> layer_delta_norms(const ParamState& state);

/// theta <- theta - mu g. Throws DivergenceError on non-finite input or output.
ParamState sgd_step(const ParamState& state, const Layers& grads, double mu,
                    StepDiagnostics* diagnostics = nullptr);

/// theta <- theta - mu / Gamma(2 - alpha_j) (|dtheta| + delta)^(1 - alpha_j) g.
ParamState fosgd_step(const ParamState& state, const Layers& grads, double mu,
                      const AlphaState& alpha, const OptimConfig& cfg,
                      StepDiagnostics* diagnostics = nullptr);

struct TwoSedStep {
  ParamState state;
  SedEstimate sed;
  AlphaState alpha;
  double mu = 0.0;
  StepDiagnostics diagnostics;
};

/// One full adaptive iteration: EMA Fisher update, per-layer 2SED, running
/// d_max, exponent adaptation, 1/sqrt(t) rate and the fractional update.
/// `blocks` is only modified when the step succeeds.
TwoSedStep twosed_fosgd_step(const ParamState& state, const Layers& grads,
                             std::vector<FisherBlock>& blocks, const SedEstimate& sed,
                             const OptimConfig& cfg);

/// Fisher blocks sized to `layers`, diagonal above cfg.diagonal_threshold.
std::vector<FisherBlock> make_fisher_blocks(const Layers& layers, const OptimConfig& cfg);

/// Smallest Gamma(2 - alpha) over alpha in [alpha_lo, alpha_hi].
double gamma_floor(double alpha_lo, double alpha_hi);

/// Bound R on ||theta_t - theta_{t-1}|| for clipped gradients: the fixed
/// point of R = mu0 G max(1, C(R) / c_Gamma) with
/// C(R) = max over alpha of (delta + R)^(1 - alpha).
double iterate_bound(double mu0, double delta, double grad_bound, double alpha_lo,
                     double alpha_hi);

/// True iff every consecutive-iterate layer norm in `trajectory` is within
/// iterate_bound(). The exponent range defaults to [alpha_min, alpha0].
bool bounded_iterate_check(const std::vector<ParamState>& trajectory, const OptimConfig& cfg,
                           double grad_bound);
bool bounded_iterate_check(const std::vector<ParamState>& trajectory, const OptimConfig& cfg,
                           double grad_bound, double alpha_lo, double alpha_hi);

enum class OptimizerKind { sgd, fosgd, twosed };

/// Result of one Optimizer::step.
struct StepReport {
  std::size_t t = 0;  // step index the gradient was evaluated at
  double mu = 0.0;
  std::vector<double> alpha;
  std::vector<double> d_zeta;
  std::vector<double> lower_2sed;
  double d_max = 0.0;
  StepDiagnostics diagnostics;
};

/// Stateful driver. Step 0 is always the classical step with rate mu0; later
/// steps follow the configured rule. With `track_sed` the baselines also keep
/// Fisher blocks and report 2SED values without using them.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, OptimConfig cfg, Layers theta0, bool track_sed = false);

  StepReport step(Layers grads);

  const ParamState& state() const noexcept { return state_; }
  const SedEstimate& sed() const noexcept { return sed_; }
  const std::vector<FisherBlock>& fisher_blocks() const noexcept { return blocks_; }
  OptimizerKind kind() const noexcept { return kind_; }
  const OptimConfig& config() const noexcept { return cfg_; }

 private:
  OptimizerKind kind_;
  OptimConfig cfg_;
  bool track_sed_;
  ParamState state_;
  std::vector<FisherBlock> blocks_;
  SedEstimate sed_;
};

}  // namespace fracsed

#endif  // FRACSED_OPTIM_HPP
