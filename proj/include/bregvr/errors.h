// Copyright 2026 The bregvr Authors.
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

#ifndef BREGVR_ERRORS_H_
#define BREGVR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace bregvr {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point lies outside the interior domain of a mirror map.
class DomainError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

// No closed-form mirror prox is registered for a (geometry, function) pair.
class UnsupportedPair : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Iterates left the bounded region (norm above 1e12 or non-finite).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

// A primal-dual gap pair came out negative beyond tolerance, which means the
// reference point is not a saddle point.
class NegativeGapError : public Error {
 public:
  using Error::Error;
};

class OracleFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace bregvr

#endif  // BREGVR_ERRORS_H_
