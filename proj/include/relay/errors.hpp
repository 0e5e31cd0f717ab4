/*
 * Copyright 2026 The lattice-relay Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RELAY_ERRORS_HPP
#define RELAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relay {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates its invariant. Carries the offending field name.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// The expected increment never reaches the requested threshold, so the
/// complement of the placement set would be infinite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A computed placement set is not of threshold (boundary) form.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// An iteration exceeded its cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An internal identity was violated (e.g. continuation mass >= 1).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A custom hop cost failed one of the structural conditions.
class CostModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace relay

#endif  // RELAY_ERRORS_HPP
