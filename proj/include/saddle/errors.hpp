#pragma once

#include <stdexcept>
#include <string>

namespace saddle {

// Shapes, indices or construction preconditions that do not line up.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameter values outside the admissible range (nonpositive radius,
// lambda below the weak-coupling threshold, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Nonfinite iterates, iteration caps, or a runtime-asserted inequality
// that failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration or instance text; carries line/key context in
// the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace saddle
