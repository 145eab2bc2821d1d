// Copyright 2026 The OPMP Authors
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

namespace opmp {

// Bad call: wrong dimensions, nonpositive step weights, out-of-range indices.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined evaluation, e.g. an infinite KL divergence.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An oracle returned non-finite data or a trace is missing fields.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested operation has no closed form for this family.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A schedule or state invariant was broken inside the library.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, int constraint_index)
      : std::runtime_error(what), constraint_index_(constraint_index) {}
  int constraint_index() const { return constraint_index_; }

 private:
  int constraint_index_;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Scenario configuration rejected; the message lists the offending fields.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace opmp
