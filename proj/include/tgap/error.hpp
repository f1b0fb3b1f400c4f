#pragma once

#include <stdexcept>
#include <string>

namespace tgap {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A documented precondition of an operation was violated (bad modulus,
/// non-prime characteristic, element not in group, ...). Maps to CLI exit
/// code 2.
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// An enumeration or solver cap would be exceeded.
struct CapExceededError : PreconditionError {
  explicit CapExceededError(const std::string& what) : PreconditionError(what) {}
};

/// Exact integer arithmetic left the representable range.
struct OverflowError : Error {
  explicit OverflowError(const std::string& what) : Error(what) {}
};

}  // namespace tgap
