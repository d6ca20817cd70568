// Copyright 2026 The powergame Authors
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

#ifndef POWERGAME_ERRORS_H_
#define POWERGAME_ERRORS_H_

#include <stdexcept>
#include <string>

namespace powergame {

// Base of every error raised by the library. The CLI maps these to the
// "model invariant" exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative SINR,
// zero players, lambda outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A root solver failed to converge within its iteration cap.
class SolverError : public Error {
 public:
  using Error::Error;
};

// (K-1) beta* >= 1, or a Nash power above the cap.
class NonSaturationError : public Error {
 public:
  using Error::Error;
};

// Equal-received-power profile would need more than the power cap.
class PowerCapError : public Error {
 public:
  using Error::Error;
};

// A strategy was asked to act without a signal its information row needs.
class InformationError : public Error {
 public:
  using Error::Error;
};

// Invalid channel model (probabilities, irreducibility, empty mass, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Requested configuration is outside what an operation supports.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace powergame

#endif  // POWERGAME_ERRORS_H_
