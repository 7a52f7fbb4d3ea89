// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wordlen {

/// Violated precondition or malformed input.
class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A configured cap (extension degree, word length, retry budget, ...) was hit.
class CapExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input set does not generate the full matrix algebra where that is required.
class ReducibleInput : public DomainError {
  public:
    using DomainError::DomainError;
};

/// The hypothesis of a conditional construction does not hold for this input.
class HypothesisFailed : public DomainError {
  public:
    using DomainError::DomainError;
};

} // namespace wordlen
