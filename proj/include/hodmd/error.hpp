#pragma once

#include <stdexcept>
#include <string>

namespace hodmd {

/// Base class for every error raised by the library.
///
/// Errors split into two families: `ValidationError` for bad inputs that a
/// caller can fix (malformed files, out-of-range parameters), and
/// `NumericalError` for failures inside the computation itself. The CLI maps
/// the first family to exit status 2 and the second to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Input-side errors.

class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InsufficientDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnrecoverableChannelError : public ValidationError {
 public:
  explicit UnrecoverableChannelError(const std::string& channel)
      : ValidationError("channel '" + channel + "' has no finite values"), channel_(channel) {}

  const std::string& channel() const noexcept { return channel_; }

 private:
  std::string channel_;
};

class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ClockMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RangeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NyquistError : public RangeError {
 public:
  using RangeError::RangeError;
};

class SingularityError : public RangeError {
 public:
  using RangeError::RangeError;
};

// Computation-side errors.

class BranchCutError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateReductionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConjugateClosureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UndefinedMetricError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hodmd
