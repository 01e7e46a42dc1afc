#include "tomo/uncertainty.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "tomo/common.hpp"
#include "tomo/sampler.hpp"

namespace tomo {

namespace {

double fold_pi(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

// bootstrap stream ids, mixed with the angle so every estimator draws from
// its own deterministic substream
enum StreamId : std::uint64_t {
  kStreamVariance = 1,
  kStreamCovariance = 2,
  kStreamHeisenberg = 3,
  kStreamSr = 4,
  kStreamF = 5,
};

std::uint64_t stream_seed(const CheckConfig& cfg, StreamId id, double theta) {
  const std::uint64_t mixed =
      substream_seed(cfg.seed, static_cast<std::uint64_t>(id));
  return substream_seed(mixed, std::bit_cast<std::uint64_t>(theta));
}

struct Group {
  std::vector<double> values;
  double m1 = 0.0;
  double m2 = 0.0;
  double var() const { return m2 - m1 * m1; }
};

Group make_group(const QuadratureSampleSet& samples, double theta,
                 const CheckConfig& cfg) {
  Group g;
  g.values = values_at_phase(samples, theta, cfg.theta_tol);
  if (g.values.size() < cfg.min_samples)
    throw InsufficientSamplesError(theta, g.values.size(), cfg.min_samples);
  for (double v : g.values) {
    g.m1 += v;
    g.m2 += v * v;
  }
  const double n = static_cast<double>(g.values.size());
  g.m1 /= n;
  g.m2 /= n;
  return g;
}

double resampled_variance(const Group& g, std::mt19937_64& eng) {
  const std::size_t n = g.values.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = g.values[pick(eng)];
    m1 += v;
    m2 += v * v;
  }
  m1 /= static_cast<double>(n);
  m2 /= static_cast<double>(n);
  return m2 - m1 * m1;
}

// Stratified bootstrap: each replicate resamples every phase group and
// recombines with `combine`, so correlations between terms that share a
// group are kept.  Returns (point estimate, bootstrap SE).
template <class Combine>
std::pair<double, double> bootstrap(const std::vector<const Group*>& groups,
                                    const CheckConfig& cfg,
                                    std::uint64_t stream, Combine&& combine) {
  std::vector<double> vars(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) vars[i] = groups[i]->var();
  const double point = combine(vars);

  const int reps = cfg.bootstrap_replicates;
  if (reps < 2) return {point, 0.0};
  double sum = 0.0, sum2 = 0.0;
  for (int b = 0; b < reps; ++b) {
    std::mt19937_64 eng(substream_seed(stream, static_cast<std::uint64_t>(b)));
    for (std::size_t i = 0; i < groups.size(); ++i)
      vars[i] = resampled_variance(*groups[i], eng);
    const double r = combine(vars);
    sum += r;
    sum2 += r * r;
  }
  const double mean = sum / reps;
  const double se =
      std::sqrt(std::max(0.0, (sum2 / reps - mean * mean) * reps / (reps - 1)));
  return {point, se};
}

double grid_variance(const OpticalTomogramGrid& grid, double theta,
                     const CheckConfig& cfg) {
  const Eigen::ArrayXd row = row_at(grid, theta, cfg.max_interp_gap);
  const Eigen::ArrayXd& xs = grid.xs.array();
  const double m1 = integrate(row * xs, grid.dx(), cfg.rule);
  const double m2 = integrate(row * xs.square(), grid.dx(), cfg.rule);
  return m2 - m1 * m1;
}

VarianceEstimate as_estimate(double value, double se, double theta,
                             DataSource source, bool flag_negative = true) {
  VarianceEstimate est;
  est.value = value;
  est.standard_error = se;
  est.theta = theta;
  est.source = source;
  est.negative_warning = flag_negative && value < 0.0;
  return est;
}

BoundCheck bound_check(double value, double se, const CheckConfig& cfg,
                       DataSource source) {
  BoundCheck check;
  check.value = value;
  check.bound = 0.25;
  check.standard_error = se;
  check.slack =
      source == DataSource::Grid ? cfg.grid_slack : cfg.se_multiplier * se;
  check.pass = value >= check.bound - check.slack;
  return check;
}

template <class VarAt, class CovAt, class Heis, class Sr, class FAt>
UncertaintyReport build_report(const std::vector<double>& thetas,
                               const CheckConfig& cfg, DataSource source,
                               VarAt&& var_at, CovAt&& cov_at, Heis&& heis,
                               Sr&& sr, FAt&& f_at) {
  UncertaintyReport report;
  report.config = cfg;
  report.sigma_qq = var_at(0.0);
  report.sigma_pp = var_at(0.5 * kPi);
  report.sigma_qp = cov_at(0.0);
  report.heisenberg = heis();
  report.sr = sr();

  bool any_ok = false, all_ok = true;
  for (double theta : thetas) {
    FCurveEntry entry;
    entry.theta = theta;
    try {
      const FValue fv = f_at(theta);
      entry.f = fv.f;
      entry.standard_error = fv.standard_error;
      entry.slack = source == DataSource::Grid
                        ? cfg.grid_slack
                        : cfg.se_multiplier * fv.standard_error;
      any_ok = true;
      if (entry.f < -entry.slack) all_ok = false;
    } catch (const Error& e) {
      entry.error = e.what();
    }
    report.f_curve.push_back(std::move(entry));
  }
  report.f_pass = any_ok && all_ok;
  if (!any_ok)
    report.warnings.push_back("no scan angle could be evaluated");
  for (const auto& entry : report.f_curve)
    if (!entry.ok())
      report.warnings.push_back("F(" + std::to_string(entry.theta) +
                                ") skipped: " + entry.error);

  // F at theta = 0 must reduce to the determinant minus the bound: same
  // arithmetic, so the two sides are required to agree bit for bit.
  report.f_at_zero = f_at(0.0).f;
  report.sr_minus_bound = report.sr.value - report.sr.bound;
  report.cross_check_ok = report.f_at_zero == report.sr_minus_bound;

  if (report.sigma_qq.negative_warning)
    report.warnings.push_back("negative variance estimate at theta = 0");
  if (report.sigma_pp.negative_warning)
    report.warnings.push_back("negative variance estimate at theta = pi/2");
  return report;
}

}  // namespace

double sr_determinant_core(double v0, double v1, double v2) {
  const double qp = v1 - 0.5 * (v0 + v2);
  return v0 * v2 - qp * qp;
}

// --- grid-backed estimators ---

VarianceEstimate variance_at(const OpticalTomogramGrid& grid, double theta,
                             const CheckConfig& config) {
  return as_estimate(grid_variance(grid, theta, config), 0.0, theta,
                     DataSource::Grid);
}

VarianceEstimate covariance_qp(const OpticalTomogramGrid& grid, double theta0,
                               const CheckConfig& config) {
  const double v0 = grid_variance(grid, theta0, config);
  const double v1 = grid_variance(grid, theta0 + 0.25 * kPi, config);
  const double v2 = grid_variance(grid, theta0 + 0.5 * kPi, config);
  return as_estimate(v1 - 0.5 * (v0 + v2), 0.0, theta0, DataSource::Grid,
                     /*flag_negative=*/false);
}

BoundCheck heisenberg_check(const OpticalTomogramGrid& grid,
                            const CheckConfig& config) {
  const double product = grid_variance(grid, 0.0, config) *
                         grid_variance(grid, 0.5 * kPi, config);
  return bound_check(product, 0.0, config, DataSource::Grid);
}

BoundCheck sr_check(const OpticalTomogramGrid& grid,
                    const CheckConfig& config) {
  const double det = sr_determinant_core(
      grid_variance(grid, 0.0, config),
      grid_variance(grid, 0.25 * kPi, config),
      grid_variance(grid, 0.5 * kPi, config));
  return bound_check(det, 0.0, config, DataSource::Grid);
}

FValue uncertainty_function(const OpticalTomogramGrid& grid, double theta,
                            const CheckConfig& config) {
  const double det = sr_determinant_core(
      grid_variance(grid, theta, config),
      grid_variance(grid, theta + 0.25 * kPi, config),
      grid_variance(grid, theta + 0.5 * kPi, config));
  return {det - 0.25, 0.0};
}

UncertaintyReport f_scan(const OpticalTomogramGrid& grid,
                         const std::vector<double>& thetas,
                         const CheckConfig& config) {
  return build_report(
      thetas, config, DataSource::Grid,
      [&](double t) { return variance_at(grid, t, config); },
      [&](double t) { return covariance_qp(grid, t, config); },
      [&] { return heisenberg_check(grid, config); },
      [&] { return sr_check(grid, config); },
      [&](double t) { return uncertainty_function(grid, t, config); });
}

UncertaintyReport f_scan(const OpticalTomogramGrid& grid,
                         const CheckConfig& config) {
  std::vector<double> thetas = config.theta_scan;
  if (thetas.empty()) {
    const Eigen::VectorXd scan = phase_scan(48);
    thetas.assign(scan.begin(), scan.end());
  }
  return f_scan(grid, thetas, config);
}

// --- sample-backed estimators ---

VarianceEstimate variance_at(const QuadratureSampleSet& samples, double theta,
                             const CheckConfig& config) {
  const Group g = make_group(samples, theta, config);
  const auto [value, se] =
      bootstrap({&g}, config, stream_seed(config, kStreamVariance, theta),
                [](const std::vector<double>& v) { return v[0]; });
  return as_estimate(value, se, theta, DataSource::Samples);
}

VarianceEstimate covariance_qp(const QuadratureSampleSet& samples,
                               double theta0, const CheckConfig& config) {
  const Group g0 = make_group(samples, theta0, config);
  const Group g1 = make_group(samples, theta0 + 0.25 * kPi, config);
  const Group g2 = make_group(samples, theta0 + 0.5 * kPi, config);
  const auto [value, se] = bootstrap(
      {&g0, &g1, &g2}, config, stream_seed(config, kStreamCovariance, theta0),
      [](const std::vector<double>& v) { return v[1] - 0.5 * (v[0] + v[2]); });
  return as_estimate(value, se, theta0, DataSource::Samples,
                     /*flag_negative=*/false);
}

BoundCheck heisenberg_check(const QuadratureSampleSet& samples,
                            const CheckConfig& config) {
  const Group g0 = make_group(samples, 0.0, config);
  const Group g2 = make_group(samples, 0.5 * kPi, config);
  const auto [value, se] = bootstrap(
      {&g0, &g2}, config, stream_seed(config, kStreamHeisenberg, 0.0),
      [](const std::vector<double>& v) { return v[0] * v[1]; });
  return bound_check(value, se, config, DataSource::Samples);
}

BoundCheck sr_check(const QuadratureSampleSet& samples,
                    const CheckConfig& config) {
  const Group g0 = make_group(samples, 0.0, config);
  const Group g1 = make_group(samples, 0.25 * kPi, config);
  const Group g2 = make_group(samples, 0.5 * kPi, config);
  const auto [value, se] =
      bootstrap({&g0, &g1, &g2}, config, stream_seed(config, kStreamSr, 0.0),
                [](const std::vector<double>& v) {
                  return sr_determinant_core(v[0], v[1], v[2]);
                });
  return bound_check(value, se, config, DataSource::Samples);
}

FValue uncertainty_function(const QuadratureSampleSet& samples, double theta,
                            const CheckConfig& config) {
  const Group g0 = make_group(samples, theta, config);
  const Group g1 = make_group(samples, theta + 0.25 * kPi, config);
  const Group g2 = make_group(samples, theta + 0.5 * kPi, config);
  const auto [value, se] =
      bootstrap({&g0, &g1, &g2}, config, stream_seed(config, kStreamF, theta),
                [](const std::vector<double>& v) {
                  return sr_determinant_core(v[0], v[1], v[2]) - 0.25;
                });
  return {value, se};
}

UncertaintyReport f_scan(const QuadratureSampleSet& samples,
                         const std::vector<double>& thetas,
                         const CheckConfig& config) {
  UncertaintyReport report = build_report(
      thetas, config, DataSource::Samples,
      [&](double t) { return variance_at(samples, t, config); },
      [&](double t) { return covariance_qp(samples, t, config); },
      [&] { return heisenberg_check(samples, config); },
      [&] { return sr_check(samples, config); },
      [&](double t) { return uncertainty_function(samples, t, config); });
  report.input_description = samples.source;
  return report;
}

UncertaintyReport f_scan(const QuadratureSampleSet& samples,
                         const CheckConfig& config) {
  std::vector<double> thetas = config.theta_scan;
  if (thetas.empty()) thetas = eligible_scan_phases(samples, config.theta_tol);
  if (thetas.empty()) thetas.push_back(0.0);  // still emit the marker entry
  return f_scan(samples, thetas, config);
}

std::vector<double> eligible_scan_phases(const QuadratureSampleSet& samples,
                                         double theta_tol) {
  std::vector<double> folded;
  folded.reserve(samples.records.size());
  for (const auto& rec : samples.records) folded.push_back(fold_pi(rec.theta));
  std::sort(folded.begin(), folded.end());
  std::vector<double> distinct;
  const double gap = std::max(theta_tol, 1e-9);
  for (double phi : folded) {
    if (distinct.empty() || phi - distinct.back() > gap) distinct.push_back(phi);
  }
  auto present = [&](double target) {
    const double t = fold_pi(target);
    for (double phi : distinct) {
      double d = std::abs(phi - t);
      d = std::min(d, kPi - d);  // circular distance mod pi
      if (d <= theta_tol + 1e-12) return true;
    }
    return false;
  };
  std::vector<double> eligible;
  for (double phi : distinct)
    if (present(phi + 0.25 * kPi) && present(phi + 0.5 * kPi))
      eligible.push_back(phi);
  return eligible;
}

}  // namespace tomo
