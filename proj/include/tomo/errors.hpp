#pragma once

#include <cstddef>
#include <stdexcept>

namespace tomo {

/// Base class for all recoverable errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A state specification violates a physicality constraint.
struct PhysicalityError : Error {
  using Error::Error;
};

/// Structural defect in an input object (shape, ordering, spacing, parse).
struct FormatError : Error {
  using Error::Error;
};

/// The requested phase cannot be resolved on the grid, even after the
/// theta+pi / X-mirror reduction.
struct AngleNotCoveredError : Error {
  double theta;
  explicit AngleNotCoveredError(double theta_);
};

/// Fewer matching records than the configured minimum.
struct InsufficientSamplesError : Error {
  double theta;
  std::size_t count;
  InsufficientSamplesError(double theta_, std::size_t count_, std::size_t required);
};

/// A Wigner grid carries non-negligible values on its outermost rows/columns.
struct SupportTruncatedError : Error {
  double boundary_max;
  explicit SupportTruncatedError(double boundary_max_, double tolerance);
};

/// Too few distinct projection angles in [0, pi) for a reconstruction.
struct InsufficientAnglesError : Error {
  int count;
  InsufficientAnglesError(int count_, int required);
};

}  // namespace tomo
