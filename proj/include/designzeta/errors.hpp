#pragma once

#include <stdexcept>
#include <string>

namespace dz {

/// Root of the library's exception hierarchy. The CLI maps subclasses onto
/// exit codes (usage-like errors 2, resource 3, precondition 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedDimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Input data that contradicts itself (e.g. a shell whose vectors do not have
/// the stated norm under the given Gram matrix).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Work or memory budget exhausted.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A mathematical hypothesis of the operation is not satisfied by the input.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dz
