#include "tomo/errors.hpp"

#include <sstream>

namespace tomo {

namespace {

template <class... Parts>
std::string join(Parts&&... parts) {
  std::ostringstream out;
  (out << ... << parts);
  return out.str();
}

}  // namespace

AngleNotCoveredError::AngleNotCoveredError(double theta_)
    : Error(join("angle not covered by the grid: theta = ", theta_,
                 " (after theta+pi reflection)")),
      theta(theta_) {}

InsufficientSamplesError::InsufficientSamplesError(double theta_,
                                                   std::size_t count_,
                                                   std::size_t required)
    : Error(join("insufficient samples at theta = ", theta_, ": ", count_,
                 " < ", required)),
      theta(theta_),
      count(count_) {}

SupportTruncatedError::SupportTruncatedError(double boundary_max_,
                                             double tolerance)
    : Error(join("wigner support truncated: max |W| on the grid boundary is ",
                 boundary_max_, " > ", tolerance)),
      boundary_max(boundary_max_) {}

InsufficientAnglesError::InsufficientAnglesError(int count_, int required)
    : Error(join("insufficient projection angles: ", count_,
                 " distinct in [0, pi), need at least ", required)),
      count(count_) {}

}  // namespace tomo
