// Copyright 2026 The mtkrr Authors. All Rights Reserved.
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
// =============================================================================
#pragma once

#include <stdexcept>
#include <string>

namespace mtkrr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs whose shapes do not agree (non-square kernel, mismatched task
/// matrix, asymmetric kernel).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be positive semidefinite has an eigenvalue below the
/// clamping tolerance.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// A parameter lies outside the domain where a quantity is defined
/// (divergent integral, invalid exponent, odd task count for two clusters...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The regularization matrix is singular, so the Kronecker operator cannot be
/// formed directly.
class SingularRegularizerError : public Error {
 public:
  using Error::Error;
};

/// Raised by epsilon_cap when the localization interval does not exist for the
/// given parameters.
class NoCapError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Non-finite values met during a numerical procedure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration. The message lists every offending key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mtkrr
