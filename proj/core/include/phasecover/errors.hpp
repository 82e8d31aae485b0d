#pragma once

#include <stdexcept>
#include <string>

namespace phasecover {

// Bad input data: malformed configs, schema violations, missing files.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The computation itself cannot proceed (e.g. the requested system is not a
// frame, or a mask violates the positivity required for inversion).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace phasecover
