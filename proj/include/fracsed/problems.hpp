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

#ifndef FRACSED_PROBLEMS_HPP
#define FRACSED_PROBLEMS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fracsed/mathkit.hpp"
#include "fracsed/noise.hpp"
#include "fracsed/optim.hpp"

namespace fracsed {

/// Loss value and gradient of a single-block objective.
struct LossGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

// ---------------------------------------------------------------------------
// AR(p) system identification

/// y(k) = sum_i a_i y(k - i) + xi(k), simulated for `horizon` samples.
struct ArModel {
  std::vector<double> coeffs;
  NoiseModel noise;
  std::size_t horizon = 0;

  std::size_t order() const noexcept { return coeffs.size(); }
  void validate() const;
};

struct Regressor {
  std::vector<double> phi;  // (y(k-1), ..., y(k-p))
  double target = 0.0;      // y(k)
};

/// Raw sequence y of length horizon. The first p entries are the initial
/// conditions (zero unless `initial` is given); later entries follow the
/// recursion. Throws NumericalError naming the first non-finite index.
std::vector<double> ar_simulate(const ArModel& model, RngStream& rng,
                                std::span<const double> initial = {});

/// The horizon - p regressor/target pairs of a simulated sequence.
std::vector<Regressor> ar_regressors(std::span<const double> y, std::size_t order);

/// ar_regressors(ar_simulate(model, rng), p).
std::vector<Regressor> ar_generate(const ArModel& model, RngStream& rng);

/// loss = e^2 / 2, grad = -e phi with e = y - phi . theta.
LossGrad ar_loss_grad(std::span<const double> theta, const Regressor& r);

/// Mean of ar_loss_grad losses over `data`.
double ar_mean_loss(std::span<const double> theta, const std::vector<Regressor>& data);

/// Ordinary least-squares coefficients on `data`. Throws NumericalError when
/// the normal equations are singular.
std::vector<double> ar_least_squares(const std::vector<Regressor>& data);

// ---------------------------------------------------------------------------
// Convex quadratics

/// f = theta^T A theta / 2 - b^T theta, grad = A theta - b.
LossGrad quadratic_loss_grad(std::span<const double> theta, const SymMatrix& a,
                             std::span<const double> b);

/// Minimum value of the quadratic. Throws PsdError when A is not PSD and
/// DomainError when b has a component in the null space of A (unbounded).
double quadratic_minimum(const SymMatrix& a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Tiny MLP classifier

enum class Activation { relu, tanh };

struct MlpSpec {
  std::vector<std::size_t> widths;  // input, hidden..., classes
  Activation activation = Activation::relu;
  double init_scale = 0.05;

  void validate() const;
  std::size_t layer_count() const noexcept { return widths.size() - 1; }
  /// Parameter count of layer l: weights (out x in, row-major) then biases.
  std::size_t layer_size(std::size_t l) const { return widths[l + 1] * widths[l] + widths[l + 1]; }
};

/// Row-major inputs in [0, 1] with integer labels.
struct LabeledBatch {
  std::size_t features = 0;
  std::size_t classes = 0;
  std::vector<double> inputs;
  std::vector<std::uint32_t> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {inputs.data() + i * features, features};
  }
  void validate() const;
  /// Copy of the selected rows, in the given order.
  LabeledBatch subset(std::span<const std::size_t> rows) const;
};

/// Weights uniform on [-init_scale, init_scale], biases zero.
Layers mlp_init(const MlpSpec& spec, RngStream& rng);

struct MlpLossGrad {
  double loss = 0.0;
  Layers grads;
  std::size_t correct = 0;  // argmax hits on the batch
};

/// Mean cross-entropy over the batch and per-layer gradients.
MlpLossGrad mlp_loss_grad(const MlpSpec& spec, const Layers& params, const LabeledBatch& batch);

/// Class scores for one input row.
std::vector<double> mlp_logits(const MlpSpec& spec, const Layers& params,
                               std::span<const double> input);

/// Fraction of rows whose argmax logit equals the label (ties go to the
/// lowest class index).
double mlp_accuracy(const MlpSpec& spec, const Layers& params, const LabeledBatch& data);

// ---------------------------------------------------------------------------
// IDX files

struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;
};

constexpr std::uint32_t kIdxImageMagic = 2051;
constexpr std::uint32_t kIdxLabelMagic = 2049;

IdxImages read_idx_images(const std::filesystem::path& path);
std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path);
void write_idx_images(const std::filesystem::path& path, const IdxImages& images);
void write_idx_labels(const std::filesystem::path& path, std::span<const std::uint8_t> labels);

/// Image/label pair scaled to [0, 1]. `limit` (0 = all) keeps the first rows.
/// Throws FormatError on bad magic, truncation or a count mismatch.
LabeledBatch load_idx(const std::filesystem::path& images, const std::filesystem::path& labels,
                      std::size_t classes = 10, std::size_t limit = 0);

}  // namespace fracsed

#endif  // FRACSED_PROBLEMS_HPP
