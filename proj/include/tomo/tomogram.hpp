#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tomo/common.hpp"
#include "tomo/errors.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/states.hpp"

namespace tomo {

inline constexpr std::size_t kDefaultMinSamplesPerPhase = 1000;
inline constexpr double kDefaultThetaTol = 1e-6;
/// Normalization tolerance for measured / histogram grids.
inline constexpr double kMeasuredNormTol = 1e-3;
/// Normalization tolerance for analytically generated grids.
inline constexpr double kAnalyticNormTol = 1e-6;

/// Optical tomogram W(X, theta) sampled on a rectangular grid.  Rows are
/// indexed by theta (strictly increasing, in [0, 2pi)), columns by the
/// uniformly spaced X values.  Construction enforces the structural
/// invariants; value-level invariants (non-negativity, per-row normalization)
/// are checked by validate().
struct OpticalTomogramGrid {
  Eigen::VectorXd thetas;
  Eigen::VectorXd xs;
  Eigen::MatrixXd w;  // w(i, j) = density at (thetas[i], xs[j])

  OpticalTomogramGrid() = default;
  OpticalTomogramGrid(Eigen::VectorXd thetas_, Eigen::VectorXd xs_,
                      Eigen::MatrixXd w_);

  Eigen::Index n_thetas() const { return thetas.size(); }
  Eigen::Index n_xs() const { return xs.size(); }
  double dx() const { return xs.size() > 1 ? xs(1) - xs(0) : 0.0; }
};

/// Point (mu, nu) != (0, 0) labelling a symplectic-tomogram slice.
struct SymplecticPoint {
  double mu = 1.0;
  double nu = 0.0;

  SymplecticPoint(double mu_, double nu_);

  double scale() const;  // sqrt(mu^2 + nu^2)
  double angle() const;  // atan2(nu, mu) wrapped into [0, 2pi)
};

struct QuadratureSample {
  double theta;
  double x;
};

/// Raw homodyne records plus provenance metadata.
struct QuadratureSampleSet {
  std::vector<QuadratureSample> records;
  std::string source;
  std::optional<std::uint64_t> seed;
};

struct NormalizationDefect {
  Eigen::Index theta_index;
  double theta;
  double defect;  // |trapezoid(row) - 1|
};

struct NegativeDensity {
  Eigen::Index theta_index;
  Eigen::Index x_index;
  double theta;
  double x;
  double value;
};

struct GridValidationReport {
  bool pass = true;
  double eps_norm = 0.0;
  double max_defect = 0.0;
  std::vector<NormalizationDefect> non_normalized;
  std::vector<NegativeDensity> negatives;
};

/// Checks every row for non-negativity and unit trapezoid normalization.
GridValidationReport validate(const OpticalTomogramGrid& grid,
                              double eps_norm = kAnalyticNormTol);

/// Largest angular gap between adjacent grid rows (the grid's own phase
/// resolution); effectively exact-hits-only for single-row grids.
double angle_resolution(const OpticalTomogramGrid& grid);

/// Density at (theta, x): linear interpolation in X and in theta, using the
/// reflection identity W(X, theta + pi) = W(-X, theta) to extend coverage.
/// `max_neighbor_dist` caps the per-side angular interpolation distance and
/// defaults to angle_resolution(grid).  X outside the grid evaluates to 0.
double density_at(const OpticalTomogramGrid& grid, double theta, double x,
                  std::optional<double> max_neighbor_dist = {});

/// Same, for many X queries at a fixed angle (single angle resolution).
Eigen::ArrayXd density_at(const OpticalTomogramGrid& grid, double theta,
                          const Eigen::Ref<const Eigen::ArrayXd>& x_queries,
                          std::optional<double> max_neighbor_dist = {});

/// Row evaluated at the grid's own X nodes.
Eigen::ArrayXd row_at(const OpticalTomogramGrid& grid, double theta,
                      std::optional<double> max_neighbor_dist = {});

/// Symplectic tomogram W(X, mu, nu) =
///   (1 / s) * W(X / s, atan2(nu, mu))  with  s = sqrt(mu^2 + nu^2).
double symplectic_density(const OpticalTomogramGrid& grid,
                          const SymplecticPoint& point, double x);
Eigen::ArrayXd symplectic_density(const OpticalTomogramGrid& grid,
                                  const SymplecticPoint& point,
                                  const Eigen::Ref<const Eigen::ArrayXd>& xs);

/// n-th moment of X at the given phase, by quadrature over the grid row.
double moment_from_grid(const OpticalTomogramGrid& grid, double theta,
                        int order, QuadRule rule = QuadRule::Trapezoid);

struct MomentEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

/// Records within theta_tol of the phase (or of phase + pi, with the sign of
/// X flipped), used by all sample-based estimators.
std::vector<double> values_at_phase(const QuadratureSampleSet& samples,
                                    double theta,
                                    double theta_tol = kDefaultThetaTol);

/// Sample mean of X^n over the matching records, with the plug-in standard
/// error.  Throws InsufficientSamplesError below min_samples matches.
MomentEstimate moment_from_samples(
    const QuadratureSampleSet& samples, double theta, int order,
    double theta_tol = kDefaultThetaTol,
    std::size_t min_samples = kDefaultMinSamplesPerPhase);

struct HistogramOptions {
  std::size_t min_samples_per_bin = kDefaultMinSamplesPerPhase;
};

struct HistogramTomogram {
  OpticalTomogramGrid grid;
  std::size_t clipped_samples = 0;  // records outside [x_min, x_max]
};

/// Bins records into theta_bins phase bins centered at k*pi/theta_bins
/// (records folded into [0, pi) with the X sign flip first) and x_bins
/// uniform X bins over [x_min, x_max].  Each row is renormalized to unit
/// trapezoid integral, so the result passes validate() exactly.
HistogramTomogram histogram_tomogram(const QuadratureSampleSet& samples,
                                     int theta_bins, int x_bins, double x_min,
                                     double x_max,
                                     const HistogramOptions& options = {});

/// count phases equispaced over [0, pi): k*pi/count.
Eigen::VectorXd phase_scan(int count);

/// Symmetric X grid wide enough that truncation bias on second moments
/// stays below ~1e-12 for the state: 8 sigma past the largest projected
/// spread for Gaussians, six units past the classical turning point for
/// number states.  Never narrower than [-7, 7], spacing 0.05.
Eigen::VectorXd recommended_x_grid(const StateModel& state);

/// Uniform X grid with count nodes spanning [lo, hi].
Eigen::VectorXd uniform_grid(double lo, double hi, int count);

/// Exact Gaussian tomogram rows for arbitrary first/second moments.  No
/// physicality requirement: every row is a genuine probability density as
/// long as the projected variance stays positive, which makes this the
/// back door for building sub-Heisenberg test grids.
OpticalTomogramGrid gaussian_moment_grid(double mean_q, double mean_p,
                                         double sigma_qq, double sigma_pp,
                                         double sigma_qp,
                                         const Eigen::VectorXd& thetas,
                                         const Eigen::VectorXd& xs);

/// Exact tomogram of a state model sampled on the grid.
OpticalTomogramGrid exact_tomogram_grid(const StateModel& state,
                                        const Eigen::VectorXd& thetas,
                                        const Eigen::VectorXd& xs);

}  // namespace tomo
