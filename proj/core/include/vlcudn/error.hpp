#pragma once

#include <stdexcept>
#include <string>

namespace vlcudn {

// Input outside an operation's mathematical domain (bad angle, zero count, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// AP at or below the receiver plane; no downward line of sight exists.
class DegenerateGeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Vector lengths disagree with the declared N / J / M_j.
class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent experiment configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A simulation produced a non-finite metric. Maps to CLI exit code 3.
class RuntimeAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vlcudn
