#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace spectralgas {

// Base class for every error raised by the library. The CLI maps its own
// input validation failures to exit code 2 and library errors to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class CapabilityError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
};

class ConventionError : public Error {
 public:
  using Error::Error;
};

class ContourError : public Error {
 public:
  using Error::Error;
};

class PoleEvaluationError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what, std::ptrdiff_t index = -1)
      : Error(what), index_(index) {}

  // Offending index (zero number, iteration, ...), or -1 when not applicable.
  std::ptrdiff_t index() const { return index_; }

 private:
  std::ptrdiff_t index_;
};

class CollisionError : public Error {
 public:
  CollisionError(const std::string& what, std::size_t i, std::size_t j)
      : Error(what), pair_(i, j) {}

  std::pair<std::size_t, std::size_t> pair() const { return pair_; }

 private:
  std::pair<std::size_t, std::size_t> pair_;
};

}  // namespace spectralgas
