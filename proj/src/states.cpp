#include "tomo/states.hpp"

#include <cmath>
#include <sstream>

#include "tomo/common.hpp"

namespace tomo {

namespace {

double gaussian_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(kTwoPi * variance);
}

}  // namespace

GaussianStateSpec::GaussianStateSpec(double mean_q_, double mean_p_,
                                     double sigma_qq_, double sigma_pp_,
                                     double sigma_qp_)
    : mean_q(mean_q_),
      mean_p(mean_p_),
      sigma_qq(sigma_qq_),
      sigma_pp(sigma_pp_),
      sigma_qp(sigma_qp_) {
  if (!(sigma_qq > 0.0) || !(sigma_pp > 0.0)) {
    std::ostringstream msg;
    msg << "state physicality violated: variances must be positive, got "
        << "sigma_qq = " << sigma_qq << ", sigma_pp = " << sigma_pp;
    throw PhysicalityError(msg.str());
  }
  const double det = sigma_qq * sigma_pp - sigma_qp * sigma_qp;
  if (det < 0.25 - kPhysicalityTol) {
    std::ostringstream msg;
    msg << "state physicality violated: sigma_qq*sigma_pp - sigma_qp^2 = "
        << det << " < 1/4";
    throw PhysicalityError(msg.str());
  }
}

Eigen::Matrix2d GaussianStateSpec::covariance() const {
  Eigen::Matrix2d c;
  c << sigma_qq, sigma_qp, sigma_qp, sigma_pp;
  return c;
}

FockStateSpec::FockStateSpec(int n_) : n(n_) {
  if (n < 0) throw PhysicalityError("fock state requires n >= 0");
}

GaussianStateSpec vacuum_state() { return {0.0, 0.0, 0.5, 0.5, 0.0}; }

GaussianStateSpec coherent_state(double alpha_re, double alpha_im) {
  const double s2 = std::sqrt(2.0);
  return {s2 * alpha_re, s2 * alpha_im, 0.5, 0.5, 0.0};
}

GaussianStateSpec squeezed_vacuum_state(double r, double phi) {
  const double vq = 0.5 * std::exp(-2.0 * r);
  const double vp = 0.5 * std::exp(2.0 * r);
  const double c = std::cos(phi), s = std::sin(phi);
  // R(phi) diag(vq, vp) R(phi)^T
  return {0.0, 0.0, c * c * vq + s * s * vp, s * s * vq + c * c * vp,
          c * s * (vq - vp)};
}

GaussianStateSpec thermal_state(double nbar) {
  if (nbar < 0.0) throw PhysicalityError("thermal state requires nbar >= 0");
  const double v = 0.5 * (2.0 * nbar + 1.0);
  return {0.0, 0.0, v, v, 0.0};
}

double projected_variance(const Eigen::Matrix2d& cov, double mu, double nu) {
  return mu * mu * cov(0, 0) + nu * nu * cov(1, 1) + 2.0 * mu * nu * cov(0, 1);
}

double projected_variance(const Eigen::Matrix2d& cov, double theta) {
  return projected_variance(cov, std::cos(theta), std::sin(theta));
}

double projected_mean(const Eigen::Vector2d& mean, double theta) {
  return mean(0) * std::cos(theta) + mean(1) * std::sin(theta);
}

double hermite_function(int n, double x) {
  const double h0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return h0;
  double prev = h0;
  double cur = std::sqrt(2.0) * x * h0;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1.0)) * x * cur -
                        std::sqrt(k / (k + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double tomogram_density(const StateModel& state, double theta, double x) {
  if (const auto* g = std::get_if<GaussianStateSpec>(&state)) {
    const double m = projected_mean(g->mean(), theta);
    const double v = projected_variance(g->covariance(), theta);
    return gaussian_pdf(x, m, v);
  }
  const auto& f = std::get<FockStateSpec>(state);
  const double psi = hermite_function(f.n, x);
  return psi * psi;
}

Eigen::ArrayXd tomogram_density(const StateModel& state, double theta,
                                const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  Eigen::ArrayXd out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    out(i) = tomogram_density(state, theta, xs(i));
  return out;
}

Eigen::Vector2d exact_mean(const StateModel& state) {
  if (const auto* g = std::get_if<GaussianStateSpec>(&state)) return g->mean();
  return Eigen::Vector2d::Zero();
}

Eigen::Matrix2d exact_covariance(const StateModel& state) {
  if (const auto* g = std::get_if<GaussianStateSpec>(&state))
    return g->covariance();
  const auto& f = std::get<FockStateSpec>(state);
  const double v = 0.5 * (2.0 * f.n + 1.0);
  return Eigen::Vector2d(v, v).asDiagonal();
}

double exact_wigner(const StateModel& state, double q, double p) {
  if (const auto* g = std::get_if<GaussianStateSpec>(&state)) {
    const Eigen::Matrix2d cov = g->covariance();
    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(0, 1);
    const Eigen::Vector2d d(q - g->mean_q, p - g->mean_p);
    const double quad = (d(0) * d(0) * cov(1, 1) - 2.0 * d(0) * d(1) * cov(0, 1) +
                         d(1) * d(1) * cov(0, 0)) /
                        det;
    return std::exp(-0.5 * quad) / std::sqrt(det);
  }
  const auto& f = std::get<FockStateSpec>(state);
  const double r2 = q * q + p * p;
  const double sign = (f.n % 2 == 0) ? 1.0 : -1.0;
  return 2.0 * sign * std::laguerre(static_cast<unsigned>(f.n), 2.0 * r2) *
         std::exp(-r2);
}

}  // namespace tomo
