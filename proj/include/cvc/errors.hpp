// Copyright 2026 The cvc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace cvc {

/** Base class for all errors raised by the library. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** A structurally malformed request: unknown identifiers, mismatched
 *  argument shapes, out-of-range mode indices, bad configuration keys. */
class UsageError : public Error {
 public:
  using Error::Error;
};

/** A well-formed request carrying a parameter value outside its admissible
 *  range (negative squeezing, transmissivity outside [0, 1], ...). */
class ParameterError : public Error {
 public:
  using Error::Error;
};

/** Input data that violates a mathematical contract: an asymmetric
 *  covariance matrix, a map that fails the symplectic condition, a state
 *  that breaks the uncertainty bound. */
class ValidationError : public Error {
 public:
  using Error::Error;
};

/** A numerically degenerate operation, e.g. conditioning on a measurement
 *  outcome whose variance is (near-)zero. */
class SingularityError : public Error {
 public:
  using Error::Error;
};

}  // namespace cvc
