#pragma once

#include <stdexcept>
#include <string>

namespace declab {

// Scheme scale is not of the admitted dyadic form (R = 2^{4l}, K = 2^{4s}).
struct ScaleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A point / cap / rectangle lies outside the region an operation expects.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A query rectangle cuts through the interior of a cap.
struct AlignmentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Quadrature step too coarse for the requested spatial points.
struct StepError : std::invalid_argument {
  double required_h;
  StepError(const std::string& msg, double h)
      : std::invalid_argument(msg), required_h(h) {}
};

// Phase polynomial outside the degree-<=4 class.
struct PhaseClassError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Field / sampling plan size mismatch.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad run configuration (flag values, ranges, formats).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact dyadic arithmetic left the int64 mantissa range.
struct DyadicOverflow : std::overflow_error {
  using std::overflow_error::overflow_error;
};

}  // namespace declab
