#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tomo/quadrature.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

enum class DataSource { Grid, Samples };

/// A variance (or covariance) of the rotated quadrature, with its
/// statistical error.  Negative values are reported raw, never clamped:
/// a warning flag marks them instead, so genuine violations stay visible.
struct VarianceEstimate {
  double value = 0.0;
  double standard_error = 0.0;  // 0 for grid-based estimates
  double theta = 0.0;
  DataSource source = DataSource::Grid;
  bool negative_warning = false;
};

struct CheckConfig {
  int bootstrap_replicates = 200;
  /// Absolute pass/fail slack for grid-based checks.
  double grid_slack = 1e-9;
  /// Sample-based slack = se_multiplier * bootstrap standard error.
  double se_multiplier = 3.0;
  /// Scan angles; empty selects the default (48 steps over [0, pi) for
  /// grids, the eligible recorded phases for sample sets).
  std::vector<double> theta_scan;
  std::uint64_t seed = 0;  // bootstrap resampling seed
  double theta_tol = kDefaultThetaTol;
  std::size_t min_samples = kDefaultMinSamplesPerPhase;
  QuadRule rule = QuadRule::Trapezoid;
  /// Per-side cap on angular interpolation when a phase is absent from a
  /// grid; beyond it the phase counts as not covered.
  double max_interp_gap = kPi / 24.0;
};

/// One bound check: pass iff value >= bound - slack.
struct BoundCheck {
  double value = 0.0;
  double bound = 0.25;
  double standard_error = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct FCurveEntry {
  double theta = 0.0;
  double f = 0.0;
  double standard_error = 0.0;
  double slack = 0.0;
  std::string error;  // non-empty marks a failed scan point
  bool ok() const { return error.empty(); }
};

struct FValue {
  double f = 0.0;
  double standard_error = 0.0;
};

/// Full output of a scan: the theta = 0 covariance frame, both bound checks,
/// the F(theta) curve, and provenance.
struct UncertaintyReport {
  VarianceEstimate sigma_qq, sigma_pp, sigma_qp;
  BoundCheck heisenberg;  // value = sigma_qq * sigma_pp estimate
  BoundCheck sr;          // value = determinant estimate
  std::vector<FCurveEntry> f_curve;
  bool f_pass = false;
  /// F at theta = 0 must reproduce the SR determinant minus 1/4 by the same
  /// arithmetic; both sides are recorded.
  double f_at_zero = 0.0;
  double sr_minus_bound = 0.0;
  bool cross_check_ok = false;
  std::vector<std::string> warnings;
  std::string input_description;
  CheckConfig config;
};

/// det of the rotated second-moment matrix, written purely in terms of the
/// quadrature variances at theta, theta + pi/4, theta + pi/2:
///   v0 * v2 - (v1 - (v0 + v2)/2)^2.
double sr_determinant_core(double v0, double v1, double v2);

// --- grid-backed estimators ---
VarianceEstimate variance_at(const OpticalTomogramGrid& grid, double theta,
                             const CheckConfig& config = {});
VarianceEstimate covariance_qp(const OpticalTomogramGrid& grid,
                               double theta0 = 0.0,
                               const CheckConfig& config = {});
BoundCheck heisenberg_check(const OpticalTomogramGrid& grid,
                            const CheckConfig& config = {});
BoundCheck sr_check(const OpticalTomogramGrid& grid,
                    const CheckConfig& config = {});
FValue uncertainty_function(const OpticalTomogramGrid& grid, double theta,
                            const CheckConfig& config = {});
UncertaintyReport f_scan(const OpticalTomogramGrid& grid,
                         const std::vector<double>& thetas,
                         const CheckConfig& config = {});
UncertaintyReport f_scan(const OpticalTomogramGrid& grid,
                         const CheckConfig& config = {});

// --- sample-backed estimators (bootstrap standard errors) ---
VarianceEstimate variance_at(const QuadratureSampleSet& samples, double theta,
                             const CheckConfig& config = {});
VarianceEstimate covariance_qp(const QuadratureSampleSet& samples,
                               double theta0 = 0.0,
                               const CheckConfig& config = {});
BoundCheck heisenberg_check(const QuadratureSampleSet& samples,
                            const CheckConfig& config = {});
BoundCheck sr_check(const QuadratureSampleSet& samples,
                    const CheckConfig& config = {});
FValue uncertainty_function(const QuadratureSampleSet& samples, double theta,
                            const CheckConfig& config = {});
UncertaintyReport f_scan(const QuadratureSampleSet& samples,
                         const std::vector<double>& thetas,
                         const CheckConfig& config = {});
UncertaintyReport f_scan(const QuadratureSampleSet& samples,
                         const CheckConfig& config = {});

/// Recorded phases (folded into [0, pi)) for which theta, theta + pi/4 and
/// theta + pi/2 are all present in the sample set: the default scan angles.
std::vector<double> eligible_scan_phases(const QuadratureSampleSet& samples,
                                         double theta_tol = kDefaultThetaTol);

}  // namespace tomo
