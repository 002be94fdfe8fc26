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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oracle {

Dense Dense::identity(std::size_t dim) {
  Dense d(dim);
  for (std::size_t i = 0; i < dim; ++i) d(i, i) = 1.0;
  return d;
}

Dense mul(const Dense& x, const Dense& y) {
  Dense out(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k)
      for (std::size_t j = 0; j < x.n; ++j) out(i, j) += x(i, k) * y(k, j);
  return out;
}

Dense add(const Dense& x, const Dense& y, double y_scale) {
  Dense out = x;
  for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += y_scale * y.a[i];
  return out;
}

Dense transpose(const Dense& x) {
  Dense out(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j) out(j, i) = x(i, j);
  return out;
}

double frobenius(const Dense& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

double frobenius_diff(const Dense& x, const Dense& y) { return frobenius(add(x, y, -1.0)); }

double lu_logdet(Dense m) {
  const std::size_t n = m.n;
  double logdet = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (m(piv, c) == 0.0) throw std::runtime_error("lu_logdet: singular");
    if (piv != c)
      for (std::size_t k = 0; k < n; ++k) std::swap(m(c, k), m(piv, k));
    logdet += std::log(std::abs(m(c, c)));
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m(r, c) / m(c, c);
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return logdet;
}

namespace {
Dense inverse(Dense m) {
  const std::size_t n = m.n;
  Dense inv = Dense::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(m(c, k), m(piv, k));
      std::swap(inv(c, k), inv(piv, k));
    }
    const double d = m(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      m(c, k) /= d;
      inv(c, k) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = m(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        m(r, k) -= f * m(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}
}  // namespace

Dense denman_beavers_sqrt(const Dense& m, int iterations) {
  Dense y = m;
  Dense z = Dense::identity(m.n);
  for (int k = 0; k < iterations; ++k) {
    const Dense yi = inverse(y), zi = inverse(z);
    Dense y2 = add(y, zi), z2 = add(z, yi);
    for (double& v : y2.a) v *= 0.5;
    for (double& v : z2.a) v *= 0.5;
    y = std::move(y2);
    z = std::move(z2);
  }
  return y;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Dense random_orthogonal(std::size_t n, std::uint64_t seed) {
  // Gaussian entries from a private splitmix chain and Box-Muller.
  std::uint64_t s = seed;
  auto unif = [&] {
    s = splitmix(s);
    return (static_cast<double>(s >> 11) + 0.5) * 0x1.0p-53;
  };
  Dense q(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v(n);
    for (double& x : v) x = std::sqrt(-2.0 * std::log(unif())) * std::cos(2.0 * std::numbers::pi * unif());
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += q(i, k) * v[i];
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * q(i, k);
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / norm;
  }
  return q;
}

Dense from_spectrum(const Dense& q, const std::vector<double>& values) {
  Dense out(q.n);
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t j = 0; j < q.n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < q.n; ++k) s += q(i, k) * values[k] * q(j, k);
      out(i, j) = s;
    }
  // Exact symmetry.
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t j = 0; j < i; ++j) out(j, i) = out(i, j);
  return out;
}

std::vector<double> central_diff(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    const double fp = f(x);
    x[i] = x0 - h;
    const double fm = f(x);
    x[i] = x0;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst / scale;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    q += term;
    if (std::abs(term) < 1e-12) break;
  }
  return {d, std::clamp(q, 0.0, 1.0)};
}

double stable_cdf(double x, double alpha, double scale) {
  // F(x) = 1/2 + (1/pi) int_0^inf sin(t x) exp(-(scale t)^alpha) / t dt.
  const double upper = std::pow(40.0, 1.0 / alpha) / scale;
  const int n = 40000;
  const double h = upper / n;
  auto f = [&](double t) {
    if (t == 0.0) return x;
    return std::sin(t * x) * std::exp(-std::pow(scale * t, alpha)) / t;
  };
  double s = f(0.0) + f(upper);
  for (int k = 1; k < n; ++k) s += f(k * h) * ((k % 2) ? 4.0 : 2.0);
  return 0.5 + (s * h / 3.0) / std::numbers::pi;
}

double stable_quantile(double p, double alpha, double scale) {
  double lo = -50.0 * scale, hi = 50.0 * scale;
  for (int k = 0; k < 80; ++k) {
    const double mid = 0.5 * (lo + hi);
    (stable_cdf(mid, alpha, scale) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Dense ema_direct(const std::vector<std::vector<double>>& grads, double gamma) {
  const std::size_t n = grads.front().size();
  const std::size_t t = grads.size();
  Dense out(n);
  for (std::size_t k = 0; k < t; ++k) {
    const double w = gamma * std::pow(1.0 - gamma, static_cast<double>(t - 1 - k));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += w * grads[k][i] * grads[k][j];
  }
  return out;
}

std::vector<double> ar2_autocovariance(double a1, double a2, double sigma2) {
  const double rho1 = a1 / (1.0 - a2);
  const double rho2 = a1 * rho1 + a2;
  const double g0 = sigma2 / (1.0 - a1 * rho1 - a2 * rho2);
  return {g0, rho1 * g0, rho2 * g0};
}

}  // namespace oracle
