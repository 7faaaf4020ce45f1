#pragma once

#include <stdexcept>
#include <string>

namespace stagegames {

// Root of the library's error hierarchy.
struct Error : std::runtime_error {
  explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// Bad inputs: malformed games, inconsistent tensors, inadmissible steps,
// out-of-range queries. The CLI maps these to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

// The numerics gave up: the CLI maps these to exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct KernelRowSum : ValidationError {
  using ValidationError::ValidationError;
};
struct NegativeOffDiagonal : ValidationError {
  using ValidationError::ValidationError;
};
struct PositiveDiagonal : ValidationError {
  using ValidationError::ValidationError;
};
struct NotRowStochastic : ValidationError {
  using ValidationError::ValidationError;
};
struct NonPositiveStep : ValidationError {
  using ValidationError::ValidationError;
};
struct NonDivergentTail : ValidationError {
  using ValidationError::ValidationError;
};
struct StepTooLarge : ValidationError {
  using ValidationError::ValidationError;
};
struct TruncationUnreachable : ValidationError {
  using ValidationError::ValidationError;
};
struct DegenerateDiscount : ValidationError {
  using ValidationError::ValidationError;
};
struct RateMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct OutOfRange : ValidationError {
  using ValidationError::ValidationError;
};
struct GridTooCoarse : ValidationError {
  using ValidationError::ValidationError;
};

struct NumericalFailure : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace stagegames
