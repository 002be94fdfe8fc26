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

#ifndef FRACSED_MATHKIT_HPP
#define FRACSED_MATHKIT_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace fracsed {

/// Dense symmetric matrix. Every write goes to both (i, j) and (j, i), so the
/// stored entries are exactly symmetric at all times.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t dim);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// Builds from a row-major n*n buffer; the input is symmetrized as (A + A^T)/2.
  static SymMatrix from_dense(std::size_t dim, std::span<const double> row_major);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * dim_ + j];
  }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    entries_[i * dim_ + j] = value;
    entries_[j * dim_ + i] = value;
  }

  /// this <- scale * this + weight * g g^T
  void scale_add_outer(double scale, double weight, std::span<const double> g);
  void scale(double factor);

  double trace() const noexcept;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  /// Row-major view of all n*n entries.
  std::span<const double> entries() const noexcept { return entries_; }

 private:
  std::size_t dim_;
  std::vector<double> entries_;
};

/// Eigenpairs of a symmetric matrix. Eigenvalues are sorted non-increasing;
/// `vectors` holds the matching orthonormal eigenvectors column by column
/// (column k occupies vectors[k * dim .. (k + 1) * dim)).
struct Spectrum {
  std::vector<double> values;
  std::vector<double> vectors;

  std::size_t dim() const noexcept { return values.size(); }
  double vector(std::size_t row, std::size_t k) const noexcept {
    return vectors[k * values.size() + row];
  }
};

/// Gamma function for x > 0 (Lanczos, g = 7, nine coefficients). Positive
/// integers up to 20 return the exact factorial.
double gamma(double x);

/// Full symmetric eigendecomposition. Cyclic Jacobi for small matrices,
/// Householder tridiagonalization + implicit QL above `kJacobiMaxDim`.
/// Eigenvalues in [-1e-12 * ||m||_F, 0) are clamped to zero.
Spectrum eig_sym(const SymMatrix& m);

/// Eigenvalues only (same ordering and clamping as eig_sym).
std::vector<double> eigenvalues_sym(const SymMatrix& m);

inline constexpr std::size_t kJacobiMaxDim = 48;
inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kClampBand = 1e-12;
inline constexpr double kPsdTolerance = 1e-8;

/// PSD square root V diag(sqrt(l)) V^T. Throws PsdError when the smallest
/// eigenvalue is below -1e-8 * ||m||_F.
SymMatrix sqrt_psd(const SymMatrix& m);

/// log det(I + s * m^{1/2}) = sum_i log(1 + s * sqrt(l_i)).
double logdet_plus(const SymMatrix& m, double s);

/// Same quantity when m is diagonal with the given (non-negative) entries.
double logdet_plus_diagonal(std::span<const double> diag, double s);

/// log(1 + s sqrt(l)) summed over a precomputed non-negative spectrum.
double logdet_plus_spectrum(std::span<const double> eigenvalues, double s);

}  // namespace fracsed

#endif  // FRACSED_MATHKIT_HPP
