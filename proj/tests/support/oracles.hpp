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

// Independent reference computations used only by the tests. Nothing here
// calls into the library under test.

#ifndef FRACSED_TESTS_SUPPORT_ORACLES_HPP
#define FRACSED_TESTS_SUPPORT_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

/// Dense row-major square matrix.
struct Dense {
  std::size_t n = 0;
  std::vector<double> a;

  explicit Dense(std::size_t dim = 0) : n(dim), a(dim * dim, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  static Dense identity(std::size_t dim);
};

Dense mul(const Dense& x, const Dense& y);
Dense add(const Dense& x, const Dense& y, double y_scale = 1.0);
Dense transpose(const Dense& x);
double frobenius(const Dense& x);
double frobenius_diff(const Dense& x, const Dense& y);

/// log|det| by Gaussian elimination with partial pivoting.
double lu_logdet(Dense m);

/// Principal square root by the Denman-Beavers iteration (needs an SPD input).
Dense denman_beavers_sqrt(const Dense& m, int iterations = 60);

/// Random orthogonal matrix from Gram-Schmidt on Gaussian columns.
Dense random_orthogonal(std::size_t n, std::uint64_t seed);

/// Q diag(values) Q^T.
Dense from_spectrum(const Dense& q, const std::vector<double>& values);

/// Central-difference gradient with step h.
std::vector<double> central_diff(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, double h);

/// max_i |a_i - b_i| / max(1, max |b|) over the vectors.
double max_rel_err(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// CDF of the symmetric stable law S(alpha, 0, scale, 0) by Gil-Pelaez
/// inversion of exp(-|scale t|^alpha).
double stable_cdf(double x, double alpha, double scale);
/// Quantile by bisection on stable_cdf.
double stable_quantile(double p, double alpha, double scale);

/// EMA weighted sum sum_k gamma (1-gamma)^(T-1-k) g_k g_k^T from a zero start.
Dense ema_direct(const std::vector<std::vector<double>>& grads, double gamma);

/// Stationary autocovariances (lags 0..2) of y(k) = a1 y(k-1) + a2 y(k-2) + e,
/// Var e = sigma2.
std::vector<double> ar2_autocovariance(double a1, double a2, double sigma2);

/// Independent splitmix64 step, for reproducing the library's Gaussian draws.
std::uint64_t splitmix(std::uint64_t x);

}  // namespace oracle

#endif  // FRACSED_TESTS_SUPPORT_ORACLES_HPP
