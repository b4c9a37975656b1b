// Copyright 2026 The evtp Authors
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

namespace evtp {

// All library errors derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input outside the mathematical domain of an operation (e.g. log of 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Zero channel estimate, all-equal tail samples and similar degenerate input.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient estimate matrix for zero-forcing.
class RankError : public Error {
 public:
  using Error::Error;
};

// Tail fit could not be carried out (too few excesses, no convergence).
class FitError : public Error {
 public:
  using Error::Error;
};

// No admissible solution exists for the given inputs.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace evtp
