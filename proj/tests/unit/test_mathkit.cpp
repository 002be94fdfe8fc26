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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fracsed/error.hpp"
#include "fracsed/fisher.hpp"
#include "fracsed/mathkit.hpp"
#include "fracsed/noise.hpp"
#include "../support/oracles.hpp"

using namespace fracsed;

namespace {

oracle::Dense to_dense(const SymMatrix& m) {
  oracle::Dense d(m.dim());
  d.a.assign(m.entries().begin(), m.entries().end());
  return d;
}

SymMatrix to_sym(const oracle::Dense& d) { return SymMatrix::from_dense(d.n, d.a); }

SymMatrix random_symmetric(std::size_t n, RngStream& rng) {
  SymMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, 2.0 * rng.uniform() - 1.0);
  return m;
}

SymMatrix random_psd(std::size_t n, RngStream& rng, std::size_t rank = 0) {
  if (rank == 0) rank = n;
  SymMatrix m(n);
  std::vector<double> g(n);
  for (std::size_t k = 0; k < rank; ++k) {
    for (double& x : g) x = gaussian(rng, 0.0, 1.0);
    m.scale_add_outer(1.0, 1.0, g);
  }
  return m;
}

oracle::Dense reconstruct(const Spectrum& s) {
  const std::size_t n = s.dim();
  oracle::Dense q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) q(i, k) = s.vector(i, k);
  return oracle::from_spectrum(q, s.values);
}

}  // namespace

TEST_SUITE("mathkit") {

TEST_CASE("gamma at integers and half-integers") {
  CHECK(fracsed::gamma(1.0) == 1.0);
  CHECK(fracsed::gamma(2.0) == 1.0);
  CHECK(fracsed::gamma(5.0) == 24.0);
  CHECK(fracsed::gamma(1.5) == doctest::Approx(std::sqrt(std::numbers::pi) / 2.0).epsilon(1e-14));
  CHECK(fracsed::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("gamma matches the standard library on [0.9, 2]") {
  for (double x = 0.9; x <= 2.0 + 1e-12; x += 0.001) {
    CHECK(std::abs(fracsed::gamma(x) / std::tgamma(x) - 1.0) <= 1e-10);
  }
}

TEST_CASE("gamma recurrence") {
  for (int k = 0; k < 10; ++k) {
    const double x = 1.0 + 0.1 * k;
    CHECK(std::abs(fracsed::gamma(x + 1.0) / (x * fracsed::gamma(x)) - 1.0) <= 1e-10);
  }
}

TEST_CASE("gamma minimum on [1, 2]") {
  double lo = 2.0;
  for (double x = 1.0; x <= 2.0; x += 1e-4) lo = std::min(lo, fracsed::gamma(x));
  CHECK(lo == doctest::Approx(0.8856031944108887).epsilon(1e-7));
}

TEST_CASE("gamma rejects non-positive and non-finite input") {
  CHECK_THROWS_AS(fracsed::gamma(0.0), DomainError);
  CHECK_THROWS_AS(fracsed::gamma(-1.5), DomainError);
  CHECK_THROWS_AS(fracsed::gamma(std::nan("")), DomainError);
}

TEST_CASE("SymMatrix storage stays symmetric") {
  SymMatrix m(3);
  m.set(0, 2, 4.0);
  CHECK(m(2, 0) == 4.0);
  const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const SymMatrix s = SymMatrix::from_dense(3, a);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(s(i, j) == s(j, i));
  CHECK(s(0, 1) == 3.0);
  CHECK_THROWS_AS(SymMatrix(0), DimensionError);
  CHECK_THROWS_AS(SymMatrix::from_dense(2, a), DimensionError);
}

TEST_CASE("eig_sym simple spectra") {
  const Spectrum id = eig_sym(SymMatrix::identity(3));
  CHECK(id.values == std::vector<double>{1.0, 1.0, 1.0});
  const std::vector<double> d{4.0, 9.0};
  const Spectrum s = eig_sym(SymMatrix::diagonal(d));
  CHECK(s.values[0] == doctest::Approx(9.0));
  CHECK(s.values[1] == doctest::Approx(4.0));
  CHECK(std::abs(s.vector(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("eig_sym reconstructs random symmetric matrices") {
  RngStream rng(11);
  for (std::size_t n : {1u, 2u, 5u, 9u, 30u, 60u, 120u}) {
    CAPTURE(n);
    const SymMatrix m = random_symmetric(n, rng);
    const Spectrum s = eig_sym(m);
    CHECK(std::is_sorted(s.values.rbegin(), s.values.rend()));
    const oracle::Dense md = to_dense(m);
    CHECK(oracle::frobenius_diff(reconstruct(s), md) <= 1e-9 * oracle::frobenius(md));
    oracle::Dense q(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) q(i, k) = s.vector(i, k);
    const oracle::Dense qtq = oracle::mul(oracle::transpose(q), q);
    CHECK(oracle::frobenius_diff(qtq, oracle::Dense::identity(n)) <= 1e-10 * std::sqrt(double(n)));
  }
}

TEST_CASE("eigenvalues are invariant under orthogonal similarity") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RngStream rng(seed);
    const std::size_t n = 2 + seed % 15;
    const SymMatrix m = random_symmetric(n, rng);
    const oracle::Dense q = oracle::random_orthogonal(n, seed * 7);
    const oracle::Dense rotated = oracle::mul(oracle::mul(q, to_dense(m)), oracle::transpose(q));
    const auto a = eigenvalues_sym(m);
    const auto b = eigenvalues_sym(to_sym(rotated));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
  }
}

TEST_CASE("eigenvalues-only path agrees with the full decomposition") {
  RngStream rng(5);
  for (std::size_t n : {4u, 47u, 49u, 100u}) {
    const SymMatrix m = random_psd(n, rng, n / 2 + 1);
    const auto a = eigenvalues_sym(m);
    const auto b = eig_sym(m).values;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9 * (1.0 + std::abs(b[0])));
  }
}

TEST_CASE("tiny negative eigenvalues are clamped, large ones are reported") {
  const std::vector<double> d{1.0, -1e-14};
  const auto v = eigenvalues_sym(SymMatrix::diagonal(d));
  CHECK(v[1] == 0.0);
  const std::vector<double> bad{1.0, -1e-3};
  CHECK_THROWS_AS(sqrt_psd(SymMatrix::diagonal(bad)), PsdError);
  CHECK_THROWS_AS(logdet_plus(SymMatrix::diagonal(bad), 1.0), PsdError);
}

TEST_CASE("eig_sym rejects non-finite entries") {
  SymMatrix m(2);
  m.set(0, 1, std::nan(""));
  CHECK_THROWS_AS(eig_sym(m), DomainError);
}

TEST_CASE("sqrt_psd closed forms") {
  const SymMatrix r = sqrt_psd(SymMatrix::identity(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(r(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
  const std::vector<double> d{4.0, 9.0};
  const SymMatrix s = sqrt_psd(SymMatrix::diagonal(d));
  CHECK(s(0, 0) == doctest::Approx(2.0));
  CHECK(s(1, 1) == doctest::Approx(3.0));
  CHECK(s(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("sqrt_psd squares back on an EMA Fisher block") {
  RngStream rng(3);
  FisherBlock block(0, 6, 0.1, FisherMode::full);
  std::vector<double> g(6);
  for (int t = 0; t < 40; ++t) {
    for (double& x : g) x = gaussian(rng, 0.0, 1.0);
    block.update({0, g});
  }
  const SymMatrix& m = block.raw().full();
  const oracle::Dense r = to_dense(sqrt_psd(m));
  const oracle::Dense md = to_dense(m);
  CHECK(oracle::frobenius_diff(oracle::mul(r, r), md) <= 1e-8 * oracle::frobenius(md));
}

TEST_CASE("sqrt_psd agrees with Denman-Beavers on SPD input") {
  RngStream rng(21);
  for (int k = 0; k < 10; ++k) {
    SymMatrix m = random_psd(5, rng);
    for (std::size_t i = 0; i < 5; ++i) m.set(i, i, m(i, i) + 0.5);
    const oracle::Dense db = oracle::denman_beavers_sqrt(to_dense(m));
    const oracle::Dense r = to_dense(sqrt_psd(m));
    CHECK(oracle::frobenius_diff(r, db) <= 1e-9 * oracle::frobenius(db));
  }
}

TEST_CASE("sqrt_psd of sqrt_psd to the fourth power recovers the input") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t n = 6;
    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) lam[i] = std::pow(10.0, -4.0 * double(i) / double(n - 1));
    const oracle::Dense md = oracle::from_spectrum(oracle::random_orthogonal(n, seed), lam);
    const oracle::Dense q = to_dense(sqrt_psd(sqrt_psd(to_sym(md))));
    const oracle::Dense q2 = oracle::mul(q, q);
    CHECK(oracle::frobenius_diff(oracle::mul(q2, q2), md) <= 1e-6 * oracle::frobenius(md));
  }
}

TEST_CASE("logdet_plus closed forms") {
  CHECK(logdet_plus(SymMatrix(5), 3.0) == 0.0);
  CHECK(logdet_plus(SymMatrix::identity(2), 3.0) == doctest::Approx(2.0 * std::log(4.0)));
  CHECK_THROWS_AS(logdet_plus(SymMatrix::identity(2), -1.0), DomainError);
}

TEST_CASE("logdet_plus matches the LU log-determinant") {
  RngStream rng(8);
  for (int k = 0; k < 20; ++k) {
    const SymMatrix m = random_psd(4, rng, 1 + k % 4);
    const double s = 2.0;
    oracle::Dense lhs = oracle::add(oracle::Dense::identity(4), to_dense(sqrt_psd(m)), s);
    CHECK(std::abs(logdet_plus(m, s) - oracle::lu_logdet(lhs)) <= 1e-9);
  }
}

TEST_CASE("logdet_plus is non-decreasing in s") {
  RngStream rng(12);
  for (int k = 0; k < 10; ++k) {
    const SymMatrix m = random_psd(5, rng, 3);
    double prev = -1.0;
    for (double s = 0.0; s < 10.0; s += 0.25) {
      const double v = logdet_plus(m, s);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("diagonal log-determinant matches the dense path") {
  const std::vector<double> d{0.0, 0.25, 4.0, 1.0};
  CHECK(logdet_plus_diagonal(d, 3.0) == doctest::Approx(logdet_plus(SymMatrix::diagonal(d), 3.0)));
}

}  // TEST_SUITE
