// Copyright 2026 The mssvs Authors
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

namespace mssvs {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (dimension mismatch, bad index).
class ContractViolation : public Error {
  public:
    using Error::Error;
};

/// A physical parameter lies outside its domain, or a derived discriminant
/// that must be positive is not.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// The requested work exceeds a configured cap. Raise the cap; results are
/// never silently truncated.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// The heralded state does not exist (success probability is zero).
class UndefinedStateError : public Error {
  public:
    using Error::Error;
};

/// An iterative or consistency check failed numerically.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Fock-space truncation is too small for the requested accuracy.
class TruncationError : public Error {
  public:
    TruncationError(const std::string &what, int required_cutoff)
        : Error(what), required_cutoff_(required_cutoff) {}

    /// Smallest cutoff that would satisfy the failed criterion, or -1 if unknown.
    [[nodiscard]] int required_cutoff() const noexcept { return required_cutoff_; }

  private:
    int required_cutoff_;
};

} // namespace mssvs
