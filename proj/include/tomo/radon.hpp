#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "tomo/states.hpp"
#include "tomo/tomogram.hpp"

namespace tomo {

/// Wigner function W(q, p) on a rectangular grid, with the convention that
/// the full integral equals 2*pi (so tomogram rows are line integrals of
/// W / (2*pi)).  Values may be negative; construction checks structure only.
struct WignerGrid {
  Eigen::VectorXd qs;
  Eigen::VectorXd ps;
  Eigen::MatrixXd w;  // w(i, j) = W(qs[i], ps[j])

  WignerGrid() = default;
  WignerGrid(Eigen::VectorXd qs_, Eigen::VectorXd ps_, Eigen::MatrixXd w_);

  double dq() const { return qs.size() > 1 ? qs(1) - qs(0) : 0.0; }
  double dp() const { return ps.size() > 1 ? ps(1) - ps(0) : 0.0; }
};

/// 2-D trapezoid integral over the grid.
double wigner_integral(const WignerGrid& grid);

/// Bilinear interpolation; 0 outside the grid rectangle.
double wigner_at(const WignerGrid& grid, double q, double p);

struct ForwardRadonOptions {
  /// Largest |W| tolerated on the outermost rows/columns before the grid is
  /// considered to truncate the state's support.  Filtered back-projection
  /// outputs carry boundary ripple of a few 1e-3, which must stay legal.
  double boundary_tol = 1e-2;
};

struct ForwardRadonResult {
  OpticalTomogramGrid grid;
  Eigen::VectorXd row_defects;  // |trapezoid(row) - 1| per theta, not fixed up
};

/// Line-integral projections W(X, theta) = integral of W / (2*pi) along
/// X = q cos(theta) + p sin(theta).  Rows are computed by walking the grid
/// nodes of the axis best aligned with the line and cubic-spline
/// interpolating along the other axis, then applying the trapezoid rule.
ForwardRadonResult forward_radon(const WignerGrid& wigner,
                                 const Eigen::VectorXd& thetas,
                                 const Eigen::VectorXd& xs,
                                 const ForwardRadonOptions& options = {});

struct InverseRadonOptions {
  /// Ramp-filter cutoff as a fraction of the X-grid Nyquist frequency pi/dx.
  double cutoff_fraction = 0.9;
  /// Absolute angular-frequency cutoff; overrides cutoff_fraction when set.
  std::optional<double> cutoff;
  /// Cosine apodization of the ramp, for noisy data.
  bool cosine_apodization = false;
  int min_angles = 8;
};

struct InverseRadonResult {
  WignerGrid wigner;
  double cutoff = 0.0;        // cutoff actually applied
  int n_projections = 0;      // rows used (theta + pi duplicates both count)
  int distinct_angles = 0;    // distinct folded angles in [0, pi)
  double max_theta_gap = 0.0; // worst angular spacing after folding
  std::string filter;         // "ramp" or "ramp-cosine"
  double normalization_defect = 0.0;  // |integral / (2*pi) - 1|
};

/// Filtered back-projection: each row is ramp-filtered with a hard cutoff
/// (realized by FFT on a zero-padded copy), then accumulated over angles
/// with weight pi / n_rows and linear interpolation in X.  Rows with theta
/// in [pi, 2pi) contribute through the reflection identity automatically.
InverseRadonResult inverse_radon(const OpticalTomogramGrid& grid,
                                 const Eigen::VectorXd& qs,
                                 const Eigen::VectorXd& ps,
                                 const InverseRadonOptions& options = {});

/// Exact Wigner function of a state model sampled on a grid.
WignerGrid exact_wigner_grid(const StateModel& state,
                             const Eigen::VectorXd& qs,
                             const Eigen::VectorXd& ps);

}  // namespace tomo
