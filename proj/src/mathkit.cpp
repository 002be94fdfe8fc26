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

#include "fracsed/mathkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "fracsed/error.hpp"

namespace fracsed {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain";
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::numerical: return "numerical";
    case ErrorCode::psd_violation: return "psd_violation";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
    case ErrorCode::format: return "format";
    case ErrorCode::divergence: return "divergence";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
  if (dim == 0) throw DimensionError("SymMatrix: dimension must be >= 1");
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.entries_[i * dim + i] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m.entries_[i * diag.size() + i] = diag[i];
  return m;
}

SymMatrix SymMatrix::from_dense(std::size_t dim, std::span<const double> row_major) {
  if (row_major.size() != dim * dim) {
    throw DimensionError("SymMatrix::from_dense: expected " + std::to_string(dim * dim) +
                         " entries, got " + std::to_string(row_major.size()));
  }
  SymMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) {
      m.set(i, j, 0.5 * (row_major[i * dim + j] + row_major[j * dim + i]));
    }
  }
  return m;
}

void SymMatrix::scale_add_outer(double scale, double weight, std::span<const double> g) {
  if (g.size() != dim_) {
    throw DimensionError("SymMatrix::scale_add_outer: vector length " +
                         std::to_string(g.size()) + " != dim " + std::to_string(dim_));
  }
  for (std::size_t i = 0; i < dim_; ++i) {
    const double wgi = weight * g[i];
    double* row = entries_.data() + i * dim_;
    for (std::size_t j = i; j < dim_; ++j) {
      const double v = scale * row[j] + wgi * g[j];
      row[j] = v;
      entries_[j * dim_ + i] = v;
    }
  }
}

void SymMatrix::scale(double factor) {
  for (double& v : entries_) v *= factor;
}

double SymMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += entries_[i * dim_ + i];
  return t;
}

double SymMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : entries_) s += v * v;
  return std::sqrt(s);
}

bool SymMatrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// gamma

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  if (x < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    a += kLanczosCoeffs[i] / (x + static_cast<double>(i));
  }
  const double t = x + kLanczosG + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("gamma: argument must be finite and > 0, got " + std::to_string(x));
  }
  if (x <= 20.0 && x == std::floor(x)) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  return lanczos_gamma(x);
}

// ---------------------------------------------------------------------------
// Eigendecomposition

namespace {

struct Work {
  std::size_t n;
  std::vector<double> a;  // row-major working copy
  std::vector<double> v;  // row-major eigenvector accumulator, v[row * n + col]
};

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
  }
  return std::sqrt(s);
}

// Cyclic Jacobi. On return the diagonal of `w.a` holds the eigenvalues.
void jacobi(Work& w, double norm, bool want_vectors) {
  const std::size_t n = w.n;
  auto& a = w.a;
  auto& v = w.v;
  const double tol = kJacobiTolerance * norm;
  double off = off_diagonal_norm(a, n);
  for (int sweep = 0; sweep < kJacobiMaxSweeps && off > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double app = a[p * n + p];
        const double aqq = a[q * n + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          const double nkp = c * akp - s * akq;
          const double nkq = s * akp + c * akq;
          a[k * n + p] = nkp;
          a[p * n + k] = nkp;
          a[k * n + q] = nkq;
          a[q * n + k] = nkq;
        }
        a[p * n + p] = app - t * apq;
        a[q * n + q] = aqq + t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = v[k * n + p];
            const double vkq = v[k * n + q];
            v[k * n + p] = c * vkp - s * vkq;
            v[k * n + q] = s * vkp + c * vkq;
          }
        }
      }
    }
    off = off_diagonal_norm(a, n);
  }
  if (off > tol) {
    throw NumericalError("eig_sym: Jacobi did not converge in " +
                             std::to_string(kJacobiMaxSweeps) + " sweeps (residual " +
                             std::to_string(off) + ")",
                         off);
  }
}

// Householder reduction to tridiagonal form (after the EISPACK tred2 routine).
// On entry z holds the matrix (row-major); on exit z holds the orthogonal
// transform, d the diagonal and e the sub-diagonal (e[0] = 0).
void tridiagonalize(std::vector<double>& z, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e) {
  auto Z = [&](std::size_t r, std::size_t c) -> double& { return z[r * n + c]; };
  for (std::size_t j = 0; j < n; ++j) d[j] = Z(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = Z(i - 1, j);
        Z(i, j) = 0.0;
        Z(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        Z(j, i) = f;
        g = e[j] + Z(j, j) * f;
        for (std::size_t k = j + 1; k + 1 <= i; ++k) {
          g += Z(k, j) * d[k];
          e[k] += Z(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k + 1 <= i; ++k) Z(k, j) -= (f * e[k] + g * d[k]);
        d[j] = Z(i - 1, j);
        Z(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    Z(n - 1, i) = Z(i, i);
    Z(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = Z(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += Z(k, i + 1) * Z(k, j);
        for (std::size_t k = 0; k <= i; ++k) Z(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) Z(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = Z(n - 1, j);
    Z(n - 1, j) = 0.0;
  }
  Z(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e) (after EISPACK tql2).
void tridiagonal_ql(std::vector<double>& z, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e, bool want_vectors) {
  auto Z = [&](std::size_t r, std::size_t c) -> double& { return z[r * n + c]; };
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const int max_iter = 30 * static_cast<int>(n) + 30;
  double f = 0.0;
  double tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > max_iter) {
          throw NumericalError("eig_sym: QL iteration did not converge (residual " +
                                   std::to_string(std::abs(e[l])) + ")",
                               std::abs(e[l]));
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          if (want_vectors) {
            for (std::size_t k = 0; k < n; ++k) {
              h = Z(k, ii + 1);
              Z(k, ii + 1) = s * Z(k, ii) + c * h;
              Z(k, ii) = c * Z(k, ii) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

void check_finite(const SymMatrix& m) {
  if (!m.all_finite()) {
    throw DomainError("eig_sym: matrix has non-finite entries");
  }
}

// Shared driver. Returns unsorted eigenvalues in `values` and, if requested,
// the eigenvectors as columns of the row-major `vectors`.
void decompose(const SymMatrix& m, bool want_vectors, std::vector<double>& values,
               std::vector<double>& vectors) {
  check_finite(m);
  const std::size_t n = m.dim();
  const double norm = m.frobenius_norm();
  values.assign(n, 0.0);
  vectors.clear();
  if (norm == 0.0) {
    if (want_vectors) {
      vectors.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;
    }
    return;
  }
  if (n <= kJacobiMaxDim) {
    Work w{n, {m.entries().begin(), m.entries().end()}, {}};
    if (want_vectors) {
      w.v.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) w.v[i * n + i] = 1.0;
    }
    jacobi(w, norm, want_vectors);
    for (std::size_t i = 0; i < n; ++i) values[i] = w.a[i * n + i];
    vectors = std::move(w.v);
  } else {
    std::vector<double> z(m.entries().begin(), m.entries().end());
    std::vector<double> e(n, 0.0);
    tridiagonalize(z, n, values, e);
    tridiagonal_ql(z, n, values, e, want_vectors);
    if (want_vectors) vectors = std::move(z);
  }
  const double band = kClampBand * norm;
  for (double& l : values) {
    if (l < 0.0 && l >= -band) l = 0.0;
  }
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] > values[j]; });
  return order;
}

void require_psd(const std::vector<double>& values, double norm, const char* who) {
  if (values.empty()) return;
  const double min_value = *std::min_element(values.begin(), values.end());
  if (min_value < -kPsdTolerance * norm) {
    throw PsdError(std::string(who) + ": matrix is not PSD (min eigenvalue " +
                       std::to_string(min_value) + ")",
                   min_value);
  }
}

}  // namespace

Spectrum eig_sym(const SymMatrix& m) {
  std::vector<double> values;
  std::vector<double> dense;
  decompose(m, true, values, dense);
  const std::size_t n = m.dim();
  const auto order = descending_order(values);
  Spectrum s;
  s.values.resize(n);
  s.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    s.values[k] = values[src];
    for (std::size_t row = 0; row < n; ++row) s.vectors[k * n + row] = dense[row * n + src];
  }
  return s;
}

std::vector<double> eigenvalues_sym(const SymMatrix& m) {
  std::vector<double> values;
  std::vector<double> unused;
  decompose(m, false, values, unused);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

SymMatrix sqrt_psd(const SymMatrix& m) {
  const Spectrum s = eig_sym(m);
  require_psd(s.values, m.frobenius_norm(), "sqrt_psd");
  const std::size_t n = m.dim();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) roots[k] = std::sqrt(std::max(s.values[k], 0.0));
  SymMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        if (roots[k] != 0.0) acc += roots[k] * s.vector(i, k) * s.vector(j, k);
      }
      r.set(i, j, acc);
    }
  }
  return r;
}

double logdet_plus_spectrum(std::span<const double> eigenvalues, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw DomainError("logdet_plus: scale must be finite and >= 0, got " + std::to_string(s));
  }
  double acc = 0.0;
  for (double l : eigenvalues) acc += std::log1p(s * std::sqrt(std::max(l, 0.0)));
  return acc;
}

double logdet_plus(const SymMatrix& m, double s) {
  const auto values = eigenvalues_sym(m);
  require_psd(values, m.frobenius_norm(), "logdet_plus");
  return logdet_plus_spectrum(values, s);
}

double logdet_plus_diagonal(std::span<const double> diag, double s) {
  for (double v : diag) {
    if (!std::isfinite(v)) throw DomainError("logdet_plus: non-finite diagonal entry");
  }
  return logdet_plus_spectrum(diag, s);
}

}  // namespace fracsed
