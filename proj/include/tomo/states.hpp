#pragma once

#include <Eigen/Dense>
#include <variant>

#include "tomo/errors.hpp"

namespace tomo {

/// Physicality slack for the covariance determinant bound det >= 1/4.
inline constexpr double kPhysicalityTol = 1e-12;

/// Gaussian state in dimensionless quadratures (hbar = 1, vacuum variance
/// 1/2).  Construction rejects unphysical parameter sets, so downstream code
/// may assume sigma_qq > 0, sigma_pp > 0 and
/// sigma_qq * sigma_pp - sigma_qp^2 >= 1/4 - kPhysicalityTol.
struct GaussianStateSpec {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double sigma_qq = 0.5;
  double sigma_pp = 0.5;
  double sigma_qp = 0.0;

  GaussianStateSpec() = default;
  GaussianStateSpec(double mean_q_, double mean_p_, double sigma_qq_,
                    double sigma_pp_, double sigma_qp_);

  Eigen::Vector2d mean() const { return {mean_q, mean_p}; }
  Eigen::Matrix2d covariance() const;
};

/// Number state |n>.  Its tomogram is phase independent.
struct FockStateSpec {
  int n = 0;

  FockStateSpec() = default;
  explicit FockStateSpec(int n_);
};

using StateModel = std::variant<GaussianStateSpec, FockStateSpec>;

GaussianStateSpec vacuum_state();
GaussianStateSpec coherent_state(double alpha_re, double alpha_im);
GaussianStateSpec squeezed_vacuum_state(double r, double phi = 0.0);
GaussianStateSpec thermal_state(double nbar);

/// Variance of the rotated quadrature X(mu, nu) = mu q + nu p:
/// mu^2 s_qq + nu^2 s_pp + 2 mu nu s_qp.
double projected_variance(const Eigen::Matrix2d& cov, double mu, double nu);
double projected_variance(const Eigen::Matrix2d& cov, double theta);
double projected_mean(const Eigen::Vector2d& mean, double theta);

/// Normalized Hermite function h_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi)),
/// evaluated by the three-term recurrence with the normalization folded into
/// each step (no overflow for n up to ~100).
double hermite_function(int n, double x);

/// Exact tomogram density W(X, theta) of the state: the probability density
/// of the quadrature X(theta) = q cos(theta) + p sin(theta).
double tomogram_density(const StateModel& state, double theta, double x);
Eigen::ArrayXd tomogram_density(const StateModel& state, double theta,
                                const Eigen::Ref<const Eigen::ArrayXd>& xs);

Eigen::Vector2d exact_mean(const StateModel& state);

/// Exact second central moments as a symmetric 2x2 matrix
/// [[sigma_qq, sigma_qp], [sigma_qp, sigma_pp]].
Eigen::Matrix2d exact_covariance(const StateModel& state);

/// Exact Wigner function with the convention that W integrates to 2*pi over
/// the (q, p) plane, i.e. tomogram rows are line integrals of W / (2*pi).
/// Vacuum: W(0,0) = 2.
double exact_wigner(const StateModel& state, double q, double p);

}  // namespace tomo
