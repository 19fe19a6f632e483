// Copyright 2026 The TCKR Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TCKR_ERROR_HPP_
#define TCKR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tckr {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes: validation and domain problems exit 1, everything else exits 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad files, inconsistent shapes, invalid configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numeric argument outside the domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Not enough IN or OUT shadow observations to fit an example's Gaussians.
class InsufficientShadowData : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Filesystem failures (unwritable output directory, unreadable file).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tckr

#endif  // TCKR_ERROR_HPP_
