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

#ifndef FRACSED_SRC_HARNESS_EXPERIMENTS_HPP
#define FRACSED_SRC_HARNESS_EXPERIMENTS_HPP

#include <memory>
#include <string>
#include <vector>

#include "fracsed/harness.hpp"

namespace fracsed::detail {

/// One problem instance wired to a config. Not thread-safe; one per run.
class Experiment {
 public:
  virtual ~Experiment() = default;

  virtual Layers initial_params() const = 0;
  virtual std::vector<std::string> metric_names() const = 0;

  /// Loss and metrics at `params` plus the stochastic gradient used by step t.
  virtual void evaluate(std::size_t t, const Layers& params, double& loss, Layers& grads,
                        std::vector<double>& metrics) = 0;

  /// Appends final_loss and problem-specific final values.
  virtual void summarize(const Layers& params, Summary& out) const = 0;
};

std::unique_ptr<Experiment> make_experiment(const ExperimentConfig& cfg);

/// Metric column names without building the problem (no data loading).
std::vector<std::string> metric_names(const ExperimentConfig& cfg);

/// Parameter shapes for the config, used for per-layer column counts.
std::size_t layer_count(const ExperimentConfig& cfg);

}  // namespace fracsed::detail

#endif  // FRACSED_SRC_HARNESS_EXPERIMENTS_HPP
