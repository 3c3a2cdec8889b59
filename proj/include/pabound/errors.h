// Copyright 2026 The pabound Authors
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

#ifndef PABOUND_ERRORS_H_
#define PABOUND_ERRORS_H_

#include <stdexcept>
#include <string>

namespace pabound {

// Two tables that must share an alphabet do not.
class AlphabetMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A reference marginal R_Z does not cover the support of P_Z.
class ReferenceSupportError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter (epsilon, theta, rho, ...) is outside its domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An index argument (e.g. a binomial k) is outside its range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A computation would exceed a configured size or work cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Malformed table contents: negative weights, mass above one, bad JSON.
class InvalidTableError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace pabound

#endif  // PABOUND_ERRORS_H_
