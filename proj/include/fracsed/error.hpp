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

#ifndef FRACSED_ERROR_HPP
#define FRACSED_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracsed {

enum class ErrorCode {
  domain,        // argument outside the mathematical domain
  dimension,     // shape mismatch between operands
  numerical,     // iterative method did not converge
  psd_violation, // matrix is not PSD beyond tolerance
  config,        // invalid or unknown configuration
  io,            // file could not be read or written
  format,        // malformed file contents
  divergence,    // optimizer produced a non-finite iterate
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what)
      : Error(ErrorCode::dimension, what) {}
};

/// Eigensolver failure; carries the off-diagonal residual at the iteration cap.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(ErrorCode::numerical, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class PsdError : public Error {
 public:
  PsdError(const std::string& what, double min_eigenvalue)
      : Error(ErrorCode::psd_violation, what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::config, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error(ErrorCode::format, what) {}
};

/// Non-finite gradient, update or loss. `iteration` is the failing step index.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(ErrorCode::divergence, what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace fracsed

#endif  // FRACSED_ERROR_HPP
