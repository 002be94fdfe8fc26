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

#ifndef FRACSED_NOISE_HPP
#define FRACSED_NOISE_HPP

#include <cstdint>

namespace fracsed {

/// splitmix64 finalizer. mix64(0) == 0.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Counter-based 64-bit generator: draw k is mix64(seed + k * golden_gamma).
/// Identical seeds give identical streams on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on (0, 1).
  double uniform_open() noexcept;

  /// Independent child stream keyed by `tag`; does not advance this stream.
  RngStream split(std::uint64_t tag) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Seed for run `index` of a sweep rooted at `base`; index 0 maps to `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// One N(mean, std^2) draw via Box-Muller (cosine branch).
double gaussian(RngStream& rng, double mean, double std_dev);

/// Parameters of S(alpha, skew, scale, location; 1).
struct StableParams {
  double alpha_tail = 2.0;
  double skew = 0.0;
  double scale = 1.0;
  double location = 0.0;

  void validate() const;
};

/// One draw from the alpha-stable law (Chambers-Mallows-Stuck).
double alpha_stable(RngStream& rng, const StableParams& p);

/// Additive noise source for the simulated problems.
struct NoiseModel {
  enum class Kind { none, gaussian, stable };

  Kind kind = Kind::none;
  double std_dev = 0.0;  // gaussian only
  StableParams stable;   // stable only

  static NoiseModel zero() { return {}; }
  static NoiseModel normal(double std_dev) { return {Kind::gaussian, std_dev, {}}; }
  static NoiseModel levy(const StableParams& p) { return {Kind::stable, 0.0, p}; }

  void validate() const;
  /// none consumes no draws.
  double draw(RngStream& rng) const;
};

}  // namespace fracsed

#endif  // FRACSED_NOISE_HPP
