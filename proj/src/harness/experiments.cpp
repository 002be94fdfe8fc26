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

#include "experiments.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "fracsed/error.hpp"

namespace fracsed::detail {

namespace {

// Child stream tags so each source of randomness is independent of the others.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kInitStream = 2;
constexpr std::uint64_t kShuffleStream = 3;
constexpr std::uint64_t kGradNoiseStream = 4;

double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

class ArExperiment final : public Experiment {
 public:
  explicit ArExperiment(const ExperimentConfig& cfg) : truth_(cfg.ar_coeffs) {
    ArModel model{cfg.ar_coeffs, cfg.noise,
                  cfg.ar_horizon == 0 ? cfg.iterations + cfg.ar_coeffs.size() : cfg.ar_horizon};
    RngStream rng = RngStream(cfg.seed).split(kDataStream);
    data_ = ar_generate(model, rng);
  }

  Layers initial_params() const override { return {std::vector<double>(truth_.size(), 0.0)}; }

  std::vector<std::string> metric_names() const override { return names(truth_.size()); }

  static std::vector<std::string> names(std::size_t p) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < p; ++i) out.push_back("err_a" + std::to_string(i + 1));
    return out;
  }

  void evaluate(std::size_t t, const Layers& params, double& loss, Layers& grads,
                std::vector<double>& metrics) override {
    const auto& theta = params[0];
    loss = ar_mean_loss(theta, data_);
    grads.assign(1, ar_loss_grad(theta, data_[t % data_.size()]).grad);
    metrics.resize(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) metrics[i] = std::abs(theta[i] - truth_[i]);
  }

  void summarize(const Layers& params, Summary& out) const override {
    const auto& theta = params[0];
    out.emplace_back("final_loss", ar_mean_loss(theta, data_));
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double e = std::abs(theta[i] - truth_[i]);
      worst = std::max(worst, e);
      out.emplace_back("err_a" + std::to_string(i + 1), e);
    }
    out.emplace_back("coef_err", euclid(theta, truth_));
    out.emplace_back("coef_err_max", worst);
    const auto ls = ar_least_squares(data_);
    double ls_worst = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      ls_worst = std::max(ls_worst, std::abs(ls[i] - truth_[i]));
    }
    out.emplace_back("ls_coef_err", euclid(ls, truth_));
    out.emplace_back("ls_coef_err_max", ls_worst);
  }

 private:
  std::vector<double> truth_;
  std::vector<Regressor> data_;
};

class QuadraticExperiment final : public Experiment {
 public:
  explicit QuadraticExperiment(const ExperimentConfig& cfg)
      : a_(SymMatrix::diagonal(cfg.quad_diag)),
        b_(cfg.quad_b),
        theta0_(cfg.quad_theta0),
        noise_std_(cfg.grad_noise_std),
        rng_(RngStream(cfg.seed).split(kGradNoiseStream)),
        f_star_(quadratic_minimum(a_, b_)) {}

  Layers initial_params() const override { return {theta0_}; }
  std::vector<std::string> metric_names() const override { return {"gap"}; }

  void evaluate(std::size_t, const Layers& params, double& loss, Layers& grads,
                std::vector<double>& metrics) override {
    LossGrad lg = quadratic_loss_grad(params[0], a_, b_);
    for (double& g : lg.grad) g += gaussian(rng_, 0.0, noise_std_);
    loss = lg.loss;
    grads.assign(1, std::move(lg.grad));
    metrics.assign(1, loss - f_star_);
  }

  void summarize(const Layers& params, Summary& out) const override {
    const double f = quadratic_loss_grad(params[0], a_, b_).loss;
    out.emplace_back("final_loss", f);
    out.emplace_back("final_gap", f - f_star_);
  }

 private:
  SymMatrix a_;
  std::vector<double> b_;
  std::vector<double> theta0_;
  double noise_std_;
  RngStream rng_;
  double f_star_;
};

MlpSpec mlp_spec(const ExperimentConfig& cfg) {
  MlpSpec spec;
  spec.widths.push_back(784);
  for (std::size_t h : cfg.hidden) spec.widths.push_back(h);
  spec.widths.push_back(10);
  spec.activation = cfg.activation;
  spec.init_scale = cfg.init_scale;
  return spec;
}

class MlpExperiment final : public Experiment {
 public:
  explicit MlpExperiment(const ExperimentConfig& cfg)
      : batch_size_(cfg.batch_size),
        seed_(cfg.seed),
        shuffle_(RngStream(cfg.seed).split(kShuffleStream)) {
    const std::filesystem::path dir(cfg.data_dir);
    train_ = load_idx(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte", 10,
                      cfg.train_size);
    if (train_.size() < cfg.train_size) {
      throw ConfigError("train_size " + std::to_string(cfg.train_size) + " exceeds the " +
                        std::to_string(train_.size()) + " images in " + dir.string());
    }
    if (cfg.test_size > 0) {
      test_ = load_idx(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte", 10,
                       cfg.test_size);
    }
    spec_ = mlp_spec(cfg);
    spec_.widths.front() = train_.features;
    spec_.validate();
    order_.resize(train_.size());
  }

  Layers initial_params() const override {
    RngStream rng = RngStream(seed_).split(kInitStream);
    return mlp_init(spec_, rng);
  }

  std::vector<std::string> metric_names() const override { return {"batch_acc"}; }

  void evaluate(std::size_t t, const Layers& params, double& loss, Layers& grads,
                std::vector<double>& metrics) override {
    const std::size_t n = train_.size();
    const std::size_t per_epoch = (n + batch_size_ - 1) / batch_size_;
    const std::size_t b = t % per_epoch;
    if (b == 0) reshuffle();
    const std::size_t lo = b * batch_size_;
    const std::size_t hi = std::min(n, lo + batch_size_);
    const LabeledBatch batch =
        train_.subset(std::span<const std::size_t>(order_.data() + lo, hi - lo));
    MlpLossGrad lg = mlp_loss_grad(spec_, params, batch);
    loss = lg.loss;
    grads = std::move(lg.grads);
    metrics.assign(1, static_cast<double>(lg.correct) / static_cast<double>(batch.size()));
  }

  void summarize(const Layers& params, Summary& out) const override {
    out.emplace_back("final_loss", mlp_loss_grad(spec_, params, train_).loss);
    out.emplace_back("train_accuracy", mlp_accuracy(spec_, params, train_));
    if (test_.size() > 0) out.emplace_back("test_accuracy", mlp_accuracy(spec_, params, test_));
  }

 private:
  // Fisher-Yates over the training rows, once per epoch.
  void reshuffle() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    for (std::size_t i = order_.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(shuffle_.next_u64() % i);
      std::swap(order_[i - 1], order_[j]);
    }
  }

  std::size_t batch_size_;
  std::uint64_t seed_;
  RngStream shuffle_;
  LabeledBatch train_;
  LabeledBatch test_;
  MlpSpec spec_;
  std::vector<std::size_t> order_;
};

}  // namespace

std::unique_ptr<Experiment> make_experiment(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::ar:
      return std::make_unique<ArExperiment>(cfg);
    case ProblemKind::quadratic:
      return std::make_unique<QuadraticExperiment>(cfg);
    case ProblemKind::mlp:
      return std::make_unique<MlpExperiment>(cfg);
  }
  throw ConfigError("unknown problem kind");
}

std::vector<std::string> metric_names(const ExperimentConfig& cfg) {
  switch (cfg.problem) {
    case ProblemKind::ar:
      return ArExperiment::names(cfg.ar_coeffs.size());
    case ProblemKind::quadratic:
      return {"gap"};
    case ProblemKind::mlp:
      return {"batch_acc"};
  }
  return {};
}

std::size_t layer_count(const ExperimentConfig& cfg) {
  return cfg.problem == ProblemKind::mlp ? cfg.hidden.size() + 1 : 1;
}

}  // namespace fracsed::detail
