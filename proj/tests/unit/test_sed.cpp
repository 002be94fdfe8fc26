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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "fracsed/error.hpp"
#include "fracsed/noise.hpp"
#include "fracsed/sed.hpp"
#include "../support/oracles.hpp"

using namespace fracsed;

namespace {

const SedConfig kDefault{};

FisherMatrix dense_fisher(const oracle::Dense& d) {
  return FisherMatrix(SymMatrix::from_dense(d.n, d.a));
}

}  // namespace

TEST_SUITE("sed") {

TEST_CASE("config domain") {
  CHECK_NOTHROW(kDefault.validate());
  SedConfig c;
  c.zeta = 0.6;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.zeta = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.epsilon = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.alpha0 = 1.2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.alpha_min = 0.99;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.beta = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(kDefault.curvature_scale() > 1.0);
}

TEST_CASE("curvature dimension closed forms") {
  CHECK(d_curv(FisherMatrix(SymMatrix(3)), kDefault) == 0.0);
  const double c = std::pow(0.01, -0.3);
  const double expected = 4.0 * std::log(1.0 + c) / std::abs(std::log(c));
  CHECK(d_curv(FisherMatrix(SymMatrix::identity(4)), kDefault) == doctest::Approx(expected).epsilon(1e-13));
  const double lambda = 2.7;
  const std::vector<double> d{lambda, 0.0, 0.0, 0.0, 0.0};
  CHECK(d_curv(FisherMatrix(SymMatrix::diagonal(d)), kDefault) ==
        doctest::Approx(std::log(1.0 + c * std::sqrt(lambda)) / std::abs(std::log(c))).epsilon(1e-13));
  CHECK(d_curv(FisherMatrix(std::vector<double>(d)), kDefault) ==
        doctest::Approx(std::log(1.0 + c * std::sqrt(lambda)) / std::abs(std::log(c))).epsilon(1e-13));
}

TEST_CASE("two-scale dimension composition") {
  CHECK(two_sed(FisherMatrix(SymMatrix(10)), 10, kDefault) == doctest::Approx(7.0));
  const double dc = d_curv(FisherMatrix(SymMatrix::identity(4)), kDefault);
  CHECK(two_sed(FisherMatrix(SymMatrix::identity(4)), 4, kDefault) ==
        doctest::Approx(0.7 * 4 + 0.3 * dc).epsilon(1e-14));
  CHECK_THROWS_AS(two_sed(FisherMatrix(SymMatrix(2)), 0, kDefault), DimensionError);
}

TEST_CASE("zeta close to one") {
  SedConfig c;
  c.zeta = 1.0 - 1e-9;
  CHECK(std::abs(two_sed(FisherMatrix(SymMatrix(6)), 6, c) - 6.0) <= 1e-6);
  // With curvature present the weighted term tends to sum log(1 + sqrt(l)) / |ln eps|
  // rather than vanishing.
  const double limit = 6.0 + 6.0 * std::log(2.0) / std::abs(std::log(c.epsilon));
  CHECK(std::abs(two_sed(FisherMatrix(SymMatrix::identity(6)), 6, c) - limit) <= 1e-6);
}

TEST_CASE("eigenvalue and dense log-determinant forms agree") {
  const double c = kDefault.curvature_scale();
  RngStream rng(21);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 16;
    oracle::Dense m(n);
    for (double& v : m.a) v = gaussian(rng, 0.0, 1.0);
    oracle::Dense f = oracle::mul(m, oracle::transpose(m));
    for (double& v : f.a) v /= static_cast<double>(n);
    const oracle::Dense root = oracle::denman_beavers_sqrt(f);
    const double dense = oracle::lu_logdet(oracle::add(oracle::Dense::identity(n), root, c)) /
                         std::abs(std::log(c));
    CHECK(std::abs(d_curv(dense_fisher(f), kDefault) - dense) <= 1e-9);
  }
}

TEST_CASE("rank-deficient log-determinant forms agree") {
  const double c = kDefault.curvature_scale();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::size_t n = 2 + seed % 15;
    RngStream rng(seed);
    std::vector<double> lam(n), root(n);
    for (std::size_t i = 0; i < n; ++i) {
      lam[i] = (i % 3 == 2) ? 0.0 : 3.0 * rng.uniform();
      root[i] = std::sqrt(lam[i]);
    }
    const oracle::Dense q = oracle::random_orthogonal(n, seed + 1000);
    const double dense =
        oracle::lu_logdet(oracle::add(oracle::Dense::identity(n), oracle::from_spectrum(q, root), c)) /
        std::abs(std::log(c));
    // Rounding of the zero eigenvalues is amplified by the square root.
    CHECK(std::abs(d_curv(dense_fisher(oracle::from_spectrum(q, lam)), kDefault) - dense) <= 1e-6);
  }
}

TEST_CASE("curvature dimension is monotone under eigenvalue domination") {
  RngStream rng(4);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> a(5), b(5);
    for (std::size_t i = 0; i < 5; ++i) {
      b[i] = 2.0 * rng.uniform();
      a[i] = b[i] + rng.uniform();
    }
    CHECK(d_curv(FisherMatrix(std::vector<double>(a)), kDefault) >=
          d_curv(FisherMatrix(std::vector<double>(b)), kDefault));
  }
}

TEST_CASE("lower accumulation") {
  CHECK(lower_2sed_accumulate(0.0, FisherMatrix(SymMatrix(3)), 3, kDefault) == 0.0);
  const double c = std::pow(0.01, -0.3);
  const double inc = 0.3 * 2.0 * std::log(1.0 + c) / std::log(100.0);
  const FisherMatrix id{SymMatrix::identity(2)};
  CHECK(lower_2sed_accumulate(0.0, id, 2, kDefault) == doctest::Approx(inc).epsilon(1e-14));
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) acc = lower_2sed_accumulate(acc, id, 2, kDefault);
  CHECK(acc == doctest::Approx(3.0 * inc).epsilon(1e-14));
  CHECK_THROWS_AS(lower_2sed_accumulate(0.0, id, 3, kDefault), DimensionError);
}

TEST_CASE("exponent adaptation") {
  SedEstimate s;
  s.per_layer = {4.0, 0.0, 2.0};
  s.d_max_running = 4.0;
  const AlphaState a = adapt_alpha(s, kDefault);
  CHECK(a.per_layer_alpha[0] == doctest::Approx(0.98 - 0.01));
  CHECK(a.per_layer_alpha[1] == 0.98);
  CHECK(a.per_layer_alpha[2] == 0.975);

  SedEstimate none;
  none.per_layer = {1.0, 2.0};
  for (double v : adapt_alpha(none, kDefault).per_layer_alpha) CHECK(v == 0.98);

  SedConfig steep;
  steep.beta = 5.0;
  for (double v : adapt_alpha(s, steep).per_layer_alpha) {
    CHECK(v >= steep.alpha_min);
    CHECK(v <= steep.alpha0);
  }
  CHECK(adapt_alpha(s, steep).per_layer_alpha[0] == steep.alpha_min);
}

TEST_CASE("exponent adaptation is scale invariant and monotone") {
  RngStream rng(6);
  for (int k = 0; k < 100; ++k) {
    SedEstimate s;
    s.per_layer = {10.0 * rng.uniform(), 10.0 * rng.uniform()};
    s.d_max_running = std::max(s.per_layer[0], s.per_layer[1]) + rng.uniform();
    SedEstimate scaled = s;
    const double f = 0.1 + 10.0 * rng.uniform();
    for (double& v : scaled.per_layer) v *= f;
    scaled.d_max_running *= f;
    SedConfig c;
    c.beta = 0.5;
    const auto a = adapt_alpha(s, c).per_layer_alpha;
    const auto b = adapt_alpha(scaled, c).per_layer_alpha;
    for (std::size_t j = 0; j < 2; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-14));
    if (s.per_layer[0] <= s.per_layer[1]) {
      CHECK(a[0] >= a[1]);
    } else {
      CHECK(a[0] <= a[1]);
    }
  }
}

TEST_CASE("running maximum") {
  SedEstimate s;
  s.per_layer = {3.0, 5.0};
  s.d_max_running = 4.0;
  CHECK(update_dmax(s).d_max_running == 5.0);
  s.per_layer = {1.0, 2.0};
  CHECK(update_dmax(s).d_max_running == 4.0);
  SedEstimate r;
  std::vector<double> seen;
  for (double m : {2.0, 7.0, 4.0, 6.0}) {
    r.per_layer = {m};
    r = update_dmax(r);
    seen.push_back(r.d_max_running);
  }
  CHECK(seen == std::vector<double>{2.0, 7.0, 7.0, 7.0});
}

TEST_CASE("observe keeps the estimate invariants") {
  RngStream rng(10);
  std::vector<FisherBlock> blocks;
  blocks.emplace_back(0, 3, 0.1, FisherMode::full);
  blocks.emplace_back(1, 5, 0.1, FisherMode::diagonal);
  SedEstimate s;
  double prev_max = 0.0;
  for (int t = 0; t < 30; ++t) {
    for (auto& b : blocks) {
      std::vector<double> g(b.dim());
      for (double& x : g) x = gaussian(rng, 0.0, 1.0 + t);
      b.update({b.layer_index(), g});
    }
    s = observe(s, blocks, kDefault);
    CHECK(s.per_layer.size() == 2);
    CHECK(s.per_layer[0] >= 0.7 * 3 - 1e-9);
    CHECK(s.per_layer[1] >= 0.7 * 5 - 1e-9);
    CHECK(s.lower_cumulative[1] >= s.lower_cumulative[0]);
    CHECK(s.d_max_running >= prev_max);
    CHECK(s.d_max_running >= std::max(s.per_layer[0], s.per_layer[1]));
    prev_max = s.d_max_running;
    const FisherMatrix f0 = sed_input(blocks[0], kDefault);
    CHECK(s.per_layer[0] == doctest::Approx(two_sed(f0, 3, kDefault)).epsilon(1e-14));
    CHECK(s.lower_cumulative[0] ==
          doctest::Approx(lower_2sed_accumulate(0.0, f0, 3, kDefault)).epsilon(1e-14));
  }
}

TEST_CASE("raw source skips normalization") {
  FisherBlock b(0, 2, 1.0, FisherMode::full);
  const std::vector<double> g{3.0, 4.0};
  b.update({0, g});
  SedConfig raw;
  raw.source = FisherSource::raw;
  CHECK(sed_input(b, raw).trace() == doctest::Approx(25.0));
  CHECK(sed_input(b, kDefault).trace() == doctest::Approx(2.0));
}

TEST_CASE("2SED stays below the clipped-gradient bound") {
  RngStream rng(77);
  const double grad_bound = 10.0;
  for (FisherSource source : {FisherSource::normalized, FisherSource::raw}) {
    SedConfig c;
    c.source = source;
    std::vector<FisherBlock> blocks;
    blocks.emplace_back(0, 4, 0.1, FisherMode::full);
    SedEstimate s;
    for (int t = 0; t < 300; ++t) {
      std::vector<double> g(4);
      double n = 0.0;
      for (double& x : g) {
        x = alpha_stable(rng, {1.5, 0.0, 3.0, 0.0});
        n += x * x;
      }
      n = std::sqrt(n);
      if (n > grad_bound)
        for (double& x : g) x *= grad_bound / n;
      blocks[0].update({0, g});
      s = observe(s, blocks, c);
      CHECK(s.per_layer[0] <= two_sed_upper_bound(4, grad_bound, c) + 1e-12);
    }
  }
}

}  // TEST_SUITE
