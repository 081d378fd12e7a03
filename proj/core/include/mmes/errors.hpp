// Copyright 2026 The mmes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mmes {

// Root of every error thrown by the library. The CLI maps any Error to exit
// code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (n < 2, index out
// of range, dimension mismatch, empty input).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a configured resource cap (e.g. qubit count).
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Input object fails a structural check (non-unitary matrix, bad config).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// NaN or otherwise unusable floating point result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Importance weights collapsed onto too few samples.
class DegenerateWeightsError : public Error {
 public:
  DegenerateWeightsError(const std::string& what, double ess)
      : Error(what), ess_(ess) {}
  double ess() const noexcept { return ess_; }

 private:
  double ess_;
};

}  // namespace mmes
