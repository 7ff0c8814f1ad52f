// Copyright 2026 The wqrbf Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQRBF_ERRORS_HPP
#define WQRBF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wqrbf {

/// Argument outside the supported domain of a function (e.g. negative z for W_q).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method hit its iteration cap without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A density matrix failed validation.
class StateError : public std::invalid_argument {
 public:
  enum class Kind { not_hermitian, bad_trace, not_psd, not_finite };

  StateError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A structural invariant of a model, histogram or dataset was violated.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A file could not be parsed. The message names the offending line/field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling ran out of attempts for the requested window.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wqrbf

#endif  // WQRBF_ERRORS_HPP
