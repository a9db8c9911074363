#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace genea {

// Bad argument values (nonpositive horizon, probability outside [0,1], ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operation applied outside its mathematical domain (no extant leaves, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed serialized data or an ill-formed path/point-process.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rejection loop ran past its iteration cap; carries the attempt count.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::uint64_t attempts)
      : std::runtime_error(what + " (attempts: " + std::to_string(attempts) + ")"),
        attempts_(attempts) {}

  std::uint64_t attempts() const { return attempts_; }

 private:
  std::uint64_t attempts_;
};

}  // namespace genea
