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

#include "fracsed/noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracsed/error.hpp"

namespace fracsed {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPow53 = 9007199254740992.0;
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t RngStream::next_u64() noexcept {
  ++counter_;
  return mix64(seed_ + counter_ * kGoldenGamma);
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) / kTwoPow53;
}

double RngStream::uniform_open() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) / kTwoPow53;
}

RngStream RngStream::split(std::uint64_t tag) const noexcept {
  return RngStream(mix64(seed_ ^ mix64(tag + kGoldenGamma)));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return base ^ mix64(index);
}

double gaussian(RngStream& rng, double mean, double std_dev) {
  if (!(std_dev >= 0.0)) {
    throw DomainError("gaussian: std must be >= 0, got " + std::to_string(std_dev));
  }
  const double u1 = rng.uniform_open();
  const double u2 = rng.uniform();
  if (std_dev == 0.0) return mean;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + std_dev * r * std::cos(2.0 * std::numbers::pi * u2);
}

void StableParams::validate() const {
  if (!(alpha_tail > 0.0 && alpha_tail <= 2.0)) {
    throw DomainError("stable: alpha_tail must be in (0, 2], got " + std::to_string(alpha_tail));
  }
  if (!(skew >= -1.0 && skew <= 1.0)) {
    throw DomainError("stable: skew must be in [-1, 1], got " + std::to_string(skew));
  }
  if (!(scale > 0.0)) {
    throw DomainError("stable: scale must be > 0, got " + std::to_string(scale));
  }
  if (!std::isfinite(location)) throw DomainError("stable: location must be finite");
}

double alpha_stable(RngStream& rng, const StableParams& p) {
  p.validate();
  constexpr double half_pi = std::numbers::pi / 2.0;
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = -std::log(rng.uniform_open());
  const double a = p.alpha_tail;
  const double b = p.skew;

  if (a == 1.0) {
    const double shifted = half_pi + b * v;
    const double x =
        (shifted * std::tan(v) - b * std::log(half_pi * w * std::cos(v) / shifted)) /
        half_pi;
    return p.scale * x + b * p.scale * std::log(p.scale) / half_pi + p.location;
  }

  const double tan_term = b * std::tan(half_pi * a);
  const double shift = std::atan(tan_term) / a;
  const double stretch = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * a));
  const double x = stretch * std::sin(a * (v + shift)) / std::pow(std::cos(v), 1.0 / a) *
                   std::pow(std::cos(v - a * (v + shift)) / w, (1.0 - a) / a);
  return p.scale * x + p.location;
}

void NoiseModel::validate() const {
  switch (kind) {
    case Kind::none:
      return;
    case Kind::gaussian:
      if (!(std_dev >= 0.0) || !std::isfinite(std_dev)) {
        throw DomainError("noise std must be finite and >= 0, got " + std::to_string(std_dev));
      }
      return;
    case Kind::stable:
      stable.validate();
      return;
  }
}

double NoiseModel::draw(RngStream& rng) const {
  switch (kind) {
    case Kind::gaussian:
      return gaussian(rng, 0.0, std_dev);
    case Kind::stable:
      return alpha_stable(rng, stable);
    case Kind::none:
      break;
  }
  return 0.0;
}

}  // namespace fracsed
