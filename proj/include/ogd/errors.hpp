#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ogd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations and rejected specifications.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A computed quantity came out NaN/Inf. `block` is the player block (or
// coordinate, depending on the raising site) that first went bad.
class NonFiniteValue : public Error {
 public:
  NonFiniteValue(const std::string& what, std::size_t block)
      : Error(what), block_(block) {}
  std::size_t block() const noexcept { return block_; }

 private:
  std::size_t block_;
};

class DivergenceError : public NonFiniteValue {
 public:
  using NonFiniteValue::NonFiniteValue;
};

// The game (or trajectory) lacks what the operation needs, e.g. no payoffs
// or no Nash oracle.
class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class Indeterminate : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ogd
