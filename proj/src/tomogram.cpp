#include "tomo/tomogram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tomo {

namespace {

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Signed circular distance wrapped into (-pi, pi].
double wrap_pm_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  if (r > kPi) r -= kTwoPi;
  return r;
}

// Linear interpolation on a uniform grid starting at x0; 0 outside.
template <class Derived>
double interp_x(const Eigen::DenseBase<Derived>& row, double x0, double dx,
                double x) {
  const Eigen::Index n = row.size();
  if (n == 1) return std::abs(x - x0) <= 1e-12 ? row.derived()(0) : 0.0;
  const double t = (x - x0) / dx;
  if (t < 0.0 || t > static_cast<double>(n - 1)) return 0.0;
  const auto i = static_cast<Eigen::Index>(t);
  if (i >= n - 1) return row.derived()(n - 1);
  const double f = t - static_cast<double>(i);
  return (1.0 - f) * row.derived()(i) + f * row.derived()(i + 1);
}

// A grid row seen directly or through the theta+pi mirror.
struct RowRef {
  double angle = 0.0;
  Eigen::Index row = 0;
  bool mirrored = false;
};

// Both images of every row, sorted by angle in [0, 2pi).
std::vector<RowRef> angle_atlas(const OpticalTomogramGrid& g) {
  std::vector<RowRef> atlas;
  atlas.reserve(2 * static_cast<std::size_t>(g.n_thetas()));
  for (Eigen::Index i = 0; i < g.n_thetas(); ++i) {
    atlas.push_back({wrap_two_pi(g.thetas(i)), i, false});
    atlas.push_back({wrap_two_pi(g.thetas(i) + kPi), i, true});
  }
  std::sort(atlas.begin(), atlas.end(), [](const RowRef& a, const RowRef& b) {
    if (a.angle != b.angle) return a.angle < b.angle;
    if (a.row != b.row) return a.row < b.row;
    return a.mirrored < b.mirrored;
  });
  return atlas;
}

struct AngleBlend {
  RowRef lo, hi;
  double t = 0.0;  // weight of hi
};

AngleBlend resolve_angle(const OpticalTomogramGrid& g, double theta,
                         double max_neighbor_dist) {
  const auto atlas = angle_atlas(g);
  const double q = wrap_two_pi(theta);
  auto it = std::lower_bound(
      atlas.begin(), atlas.end(), q,
      [](const RowRef& r, double v) { return r.angle < v; });
  RowRef lo, hi;
  double d_lo, d_hi;
  if (it == atlas.end()) {
    hi = atlas.front();
    d_hi = hi.angle + kTwoPi - q;
  } else {
    hi = *it;
    d_hi = hi.angle - q;
  }
  if (it == atlas.begin()) {
    lo = atlas.back();
    d_lo = q - (lo.angle - kTwoPi);
  } else {
    lo = *(it - 1);
    d_lo = q - lo.angle;
  }
  constexpr double kExactHit = 1e-12;
  constexpr double kSlop = 1e-9;
  if (d_hi <= kExactHit) return {hi, hi, 0.0};
  if (d_lo <= kExactHit) return {lo, lo, 0.0};
  if (d_lo > max_neighbor_dist + kSlop || d_hi > max_neighbor_dist + kSlop)
    throw AngleNotCoveredError(theta);
  return {lo, hi, d_lo / (d_lo + d_hi)};
}

double entry_value(const OpticalTomogramGrid& g, const RowRef& r, double x) {
  return interp_x(g.w.row(r.row), g.xs(0), g.dx(), r.mirrored ? -x : x);
}

double blend_value(const OpticalTomogramGrid& g, const AngleBlend& b,
                   double x) {
  if (b.t == 0.0) return entry_value(g, b.lo, x);
  return (1.0 - b.t) * entry_value(g, b.lo, x) + b.t * entry_value(g, b.hi, x);
}

}  // namespace

OpticalTomogramGrid::OpticalTomogramGrid(Eigen::VectorXd thetas_,
                                         Eigen::VectorXd xs_,
                                         Eigen::MatrixXd w_)
    : thetas(std::move(thetas_)), xs(std::move(xs_)), w(std::move(w_)) {
  if (thetas.size() == 0 || xs.size() == 0)
    throw FormatError("tomogram grid must have at least one theta and one X");
  if (w.rows() != thetas.size() || w.cols() != xs.size()) {
    std::ostringstream msg;
    msg << "tomogram grid shape mismatch: w is " << w.rows() << "x" << w.cols()
        << ", expected " << thetas.size() << "x" << xs.size();
    throw FormatError(msg.str());
  }
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    if (thetas(i) < 0.0 || thetas(i) >= kTwoPi)
      throw FormatError("grid thetas must lie in [0, 2pi)");
    if (i > 0 && thetas(i) <= thetas(i - 1))
      throw FormatError("grid thetas must be strictly increasing");
  }
  if (xs.size() < 2) return;
  const double d0 = xs(1) - xs(0);
  if (d0 <= 0.0) throw FormatError("grid xs must be strictly increasing");
  for (Eigen::Index j = 1; j < xs.size(); ++j) {
    const double d = xs(j) - xs(j - 1);
    if (std::abs(d / d0 - 1.0) > 1e-12)
      throw FormatError("grid xs must be uniformly spaced (1e-12 relative)");
  }
}

SymplecticPoint::SymplecticPoint(double mu_, double nu_) : mu(mu_), nu(nu_) {
  if (mu == 0.0 && nu == 0.0)
    throw FormatError("symplectic point (mu, nu) must not be (0, 0)");
}

double SymplecticPoint::scale() const { return std::hypot(mu, nu); }

double SymplecticPoint::angle() const {
  return wrap_two_pi(std::atan2(nu, mu));
}

GridValidationReport validate(const OpticalTomogramGrid& grid,
                              double eps_norm) {
  GridValidationReport report;
  report.eps_norm = eps_norm;
  for (Eigen::Index i = 0; i < grid.n_thetas(); ++i) {
    const double defect = std::abs(trapezoid(grid.w.row(i), grid.dx()) - 1.0);
    report.max_defect = std::max(report.max_defect, defect);
    if (defect > eps_norm)
      report.non_normalized.push_back({i, grid.thetas(i), defect});
    for (Eigen::Index j = 0; j < grid.n_xs(); ++j) {
      if (grid.w(i, j) < 0.0)
        report.negatives.push_back(
            {i, j, grid.thetas(i), grid.xs(j), grid.w(i, j)});
    }
  }
  report.pass = report.non_normalized.empty() && report.negatives.empty();
  return report;
}

double angle_resolution(const OpticalTomogramGrid& grid) {
  if (grid.n_thetas() < 2) return 1e-9;
  double gap = 0.0;
  for (Eigen::Index i = 1; i < grid.n_thetas(); ++i)
    gap = std::max(gap, grid.thetas(i) - grid.thetas(i - 1));
  return gap;
}

double density_at(const OpticalTomogramGrid& grid, double theta, double x,
                  std::optional<double> max_neighbor_dist) {
  const double nd = max_neighbor_dist.value_or(angle_resolution(grid));
  return blend_value(grid, resolve_angle(grid, theta, nd), x);
}

Eigen::ArrayXd density_at(const OpticalTomogramGrid& grid, double theta,
                          const Eigen::Ref<const Eigen::ArrayXd>& x_queries,
                          std::optional<double> max_neighbor_dist) {
  const double nd = max_neighbor_dist.value_or(angle_resolution(grid));
  const AngleBlend b = resolve_angle(grid, theta, nd);
  Eigen::ArrayXd out(x_queries.size());
  for (Eigen::Index j = 0; j < x_queries.size(); ++j)
    out(j) = blend_value(grid, b, x_queries(j));
  return out;
}

Eigen::ArrayXd row_at(const OpticalTomogramGrid& grid, double theta,
                      std::optional<double> max_neighbor_dist) {
  return density_at(grid, theta, grid.xs.array(), max_neighbor_dist);
}

double symplectic_density(const OpticalTomogramGrid& grid,
                          const SymplecticPoint& point, double x) {
  const double s = point.scale();
  return density_at(grid, point.angle(), x / s) / s;
}

Eigen::ArrayXd symplectic_density(const OpticalTomogramGrid& grid,
                                  const SymplecticPoint& point,
                                  const Eigen::Ref<const Eigen::ArrayXd>& xs) {
  const double s = point.scale();
  return density_at(grid, point.angle(), (xs / s).eval()) / s;
}

double moment_from_grid(const OpticalTomogramGrid& grid, double theta,
                        int order, QuadRule rule) {
  if (order < 1) throw FormatError("moment order must be >= 1");
  const Eigen::ArrayXd row = row_at(grid, theta);
  const Eigen::ArrayXd integrand =
      row * grid.xs.array().pow(static_cast<double>(order));
  return integrate(integrand, grid.dx(), rule);
}

std::vector<double> values_at_phase(const QuadratureSampleSet& samples,
                                    double theta, double theta_tol) {
  std::vector<double> values;
  for (const auto& rec : samples.records) {
    const double d = wrap_pm_pi(rec.theta - theta);
    if (std::abs(d) <= theta_tol) {
      values.push_back(rec.x);
    } else if (std::abs(wrap_pm_pi(rec.theta - theta - kPi)) <= theta_tol) {
      values.push_back(-rec.x);
    }
  }
  return values;
}

MomentEstimate moment_from_samples(const QuadratureSampleSet& samples,
                                   double theta, int order, double theta_tol,
                                   std::size_t min_samples) {
  if (order < 1) throw FormatError("moment order must be >= 1");
  const std::vector<double> values = values_at_phase(samples, theta, theta_tol);
  if (values.size() < min_samples)
    throw InsufficientSamplesError(theta, values.size(), min_samples);
  const double n = static_cast<double>(values.size());
  double m1 = 0.0, m2 = 0.0;
  for (double v : values) {
    const double p = std::pow(v, order);
    m1 += p;
    m2 += p * p;
  }
  m1 /= n;
  m2 /= n;
  MomentEstimate est;
  est.value = m1;
  est.standard_error = std::sqrt(std::max(0.0, m2 - m1 * m1) / n);
  est.count = values.size();
  return est;
}

HistogramTomogram histogram_tomogram(const QuadratureSampleSet& samples,
                                     int theta_bins, int x_bins, double x_min,
                                     double x_max,
                                     const HistogramOptions& options) {
  if (theta_bins < 1 || x_bins < 2)
    throw FormatError("histogram needs theta_bins >= 1 and x_bins >= 2");
  if (!(x_max > x_min)) throw FormatError("histogram needs x_max > x_min");

  const double dtheta = kPi / theta_bins;
  const double dx = (x_max - x_min) / x_bins;

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(theta_bins, x_bins);
  Eigen::VectorXd retained = Eigen::VectorXd::Zero(theta_bins);
  std::size_t clipped = 0;

  for (const auto& rec : samples.records) {
    // fold into [0, pi): measuring at theta + pi flips the sign of X
    double phi = wrap_two_pi(rec.theta);
    double x = rec.x;
    if (phi >= kPi) {
      phi -= kPi;
      x = -x;
    }
    auto k = static_cast<Eigen::Index>(std::lround(phi / dtheta));
    if (k == theta_bins) {  // wrapped through pi back to the k = 0 center
      k = 0;
      x = -x;
    }
    if (x < x_min || x > x_max) {
      ++clipped;
      continue;
    }
    auto j = static_cast<Eigen::Index>((x - x_min) / dx);
    j = std::min<Eigen::Index>(j, x_bins - 1);
    counts(k, j) += 1.0;
    retained(k) += 1.0;
  }

  for (Eigen::Index k = 0; k < theta_bins; ++k) {
    if (retained(k) < static_cast<double>(options.min_samples_per_bin))
      throw InsufficientSamplesError(k * dtheta,
                                     static_cast<std::size_t>(retained(k)),
                                     options.min_samples_per_bin);
  }

  // bin centers
  Eigen::VectorXd thetas(theta_bins);
  for (Eigen::Index k = 0; k < theta_bins; ++k) thetas(k) = k * dtheta;
  Eigen::VectorXd xs(x_bins);
  for (Eigen::Index j = 0; j < x_bins; ++j) xs(j) = x_min + (j + 0.5) * dx;

  Eigen::MatrixXd w(theta_bins, x_bins);
  for (Eigen::Index k = 0; k < theta_bins; ++k) {
    w.row(k) = counts.row(k) / (retained(k) * dx);
    const double norm = trapezoid(w.row(k), dx);
    w.row(k) /= norm;  // exact unit trapezoid integral by construction
  }

  HistogramTomogram out;
  out.grid = OpticalTomogramGrid(std::move(thetas), std::move(xs), std::move(w));
  out.clipped_samples = clipped;
  return out;
}

Eigen::VectorXd phase_scan(int count) {
  if (count < 1) throw FormatError("phase scan needs count >= 1");
  Eigen::VectorXd thetas(count);
  for (int k = 0; k < count; ++k) thetas(k) = k * kPi / count;
  return thetas;
}

Eigen::VectorXd uniform_grid(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo))
    throw FormatError("uniform grid needs count >= 2 and hi > lo");
  return Eigen::VectorXd::LinSpaced(count, lo, hi);
}

Eigen::VectorXd recommended_x_grid(const StateModel& state) {
  double half = 7.0;
  if (const auto* g = std::get_if<GaussianStateSpec>(&state)) {
    const double mid = 0.5 * (g->sigma_qq + g->sigma_pp);
    const double off = 0.5 * (g->sigma_qq - g->sigma_pp);
    const double lambda_max =
        mid + std::sqrt(off * off + g->sigma_qp * g->sigma_qp);
    half = std::hypot(g->mean_q, g->mean_p) + 8.0 * std::sqrt(lambda_max);
  } else {
    const int n = std::get<FockStateSpec>(state).n;
    half = std::sqrt(2.0 * n + 1.0) + 6.0;
  }
  half = std::max(half, 7.0);
  const int steps = static_cast<int>(std::ceil(half / 0.05));
  return uniform_grid(-0.05 * steps, 0.05 * steps, 2 * steps + 1);
}

OpticalTomogramGrid gaussian_moment_grid(double mean_q, double mean_p,
                                         double sigma_qq, double sigma_pp,
                                         double sigma_qp,
                                         const Eigen::VectorXd& thetas,
                                         const Eigen::VectorXd& xs) {
  Eigen::MatrixXd w(thetas.size(), xs.size());
  for (Eigen::Index i = 0; i < thetas.size(); ++i) {
    const double c = std::cos(thetas(i)), s = std::sin(thetas(i));
    const double m = mean_q * c + mean_p * s;
    const double v = c * c * sigma_qq + s * s * sigma_pp + 2.0 * c * s * sigma_qp;
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "projected variance is not positive at theta = " << thetas(i);
      throw FormatError(msg.str());
    }
    const double inv = -0.5 / v;
    const double norm = 1.0 / std::sqrt(kTwoPi * v);
    w.row(i) = (inv * (xs.array() - m).square()).exp() * norm;
  }
  return {thetas, xs, std::move(w)};
}

OpticalTomogramGrid exact_tomogram_grid(const StateModel& state,
                                        const Eigen::VectorXd& thetas,
                                        const Eigen::VectorXd& xs) {
  if (const auto* g = std::get_if<GaussianStateSpec>(&state))
    return gaussian_moment_grid(g->mean_q, g->mean_p, g->sigma_qq, g->sigma_pp,
                                g->sigma_qp, thetas, xs);
  // Fock tomograms are phase independent: one row, replicated.
  const Eigen::ArrayXd row = tomogram_density(state, 0.0, xs.array());
  Eigen::MatrixXd w(thetas.size(), xs.size());
  for (Eigen::Index i = 0; i < thetas.size(); ++i) w.row(i) = row;
  return {thetas, xs, std::move(w)};
}

}  // namespace tomo
