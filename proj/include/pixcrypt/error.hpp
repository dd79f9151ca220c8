#pragma once

#include <stdexcept>
#include <string>

namespace pixcrypt {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, written, or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

// Arguments that violate an operation's domain: out-of-range values,
// shape mismatches, unsupported variants.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidKeyError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Image dimensions not divisible by the block size, or mismatched shapes.
class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NotInvertibleError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace pixcrypt
