#pragma once

#include <stdexcept>
#include <string>

namespace rdv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructor or factory argument is outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A policy specification cannot be realised as a probability vector.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

// The exact oracle's joint state space exceeds its limit.
class DimensionTooLarge : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent experiment configuration. `field` is a JSON
// pointer-like path to the offending entry, empty when not applicable.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace rdv
