#pragma once

#include <stdexcept>
#include <string>

namespace ossl {

// Error taxonomy shared by every module. All derive from std::runtime_error
// so callers that only care about "something failed" can catch one type.

/// Vector/matrix dimensions disagree with what an operation requires.
class InputShapeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument is outside its documented domain.
class ParameterError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An operation was invoked in a state where it is not defined.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A scenario or training configuration violates its invariants.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A loss or parameter became NaN/Inf during training.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace ossl
