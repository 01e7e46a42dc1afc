#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomo/common.hpp"
#include "tomo/sampler.hpp"
#include "tomo/tomogram.hpp"
#include "tomo/uncertainty.hpp"

using namespace tomo;

namespace {

OpticalTomogramGrid state_grid(const StateModel& state) {
  return exact_tomogram_grid(state, phase_scan(48),
                             uniform_grid(-8.0, 8.0, 321));
}

OpticalTomogramGrid moment_grid(double sqq, double spp, double sqp) {
  return gaussian_moment_grid(0.0, 0.0, sqq, spp, sqp, phase_scan(48),
                              uniform_grid(-8.0, 8.0, 321));
}

std::vector<double> scan24() {
  const Eigen::VectorXd s = phase_scan(24);
  return {s.begin(), s.end()};
}

QuadratureSampleSet vacuum_samples(int per_phase, std::uint64_t seed) {
  const AcquisitionPlan plan({0.0, kPi / 4, kPi / 2}, per_phase, seed);
  return acquire(vacuum_state(), plan);
}

}  // namespace

TEST_SUITE("uncertainty") {

TEST_CASE("grid variances: frozen oracle values") {
  const auto vac = state_grid(vacuum_state());
  CHECK(variance_at(vac, kPi / 3).value == doctest::Approx(0.5).epsilon(1e-9));

  const auto sq = state_grid(squeezed_vacuum_state(0.5));
  // e^{-1}/2 and e/2
  CHECK(variance_at(sq, 0.0).value ==
        doctest::Approx(0.1839397205857212).epsilon(1e-9));
  CHECK(variance_at(sq, kPi / 2).value ==
        doctest::Approx(1.3591409142295225).epsilon(1e-9));
  CHECK(variance_at(sq, 0.0).standard_error == 0.0);
  CHECK(variance_at(sq, 0.0).source == DataSource::Grid);
}

TEST_CASE("covariance extraction at the pi/4 phase") {
  const auto vac = state_grid(vacuum_state());
  CHECK(std::abs(covariance_qp(vac).value) < 1e-9);

  // unrotated squeezed vacuum: cosh(1)/2 - (e^{-1} + e)/4 = 0
  const auto sq = state_grid(squeezed_vacuum_state(0.5));
  CHECK(variance_at(sq, kPi / 4).value ==
        doctest::Approx(0.7715403174076219).epsilon(1e-9));
  CHECK(std::abs(covariance_qp(sq).value) < 1e-8);

  // grid built from sigma_qp = 0.5 recovers it through the variance formula
  const auto cov = moment_grid(1.0, 1.0, 0.5);
  CHECK(covariance_qp(cov).value == doctest::Approx(0.5).epsilon(1e-8));

  // rotated frames recover the rotated covariance of a squeezed state
  const GaussianStateSpec rot = squeezed_vacuum_state(0.5, 0.6);
  const auto rot_grid = state_grid(rot);
  const double c = std::cos(kPi / 8), s = std::sin(kPi / 8);
  const Eigen::Matrix2d cov_rot = rot.covariance();
  const double expected = (cov_rot(1, 1) - cov_rot(0, 0)) * c * s +
                          cov_rot(0, 1) * (c * c - s * s);
  CHECK(covariance_qp(rot_grid, kPi / 8).value ==
        doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("heisenberg product on exact grids") {
  const auto check = heisenberg_check(state_grid(vacuum_state()));
  CHECK(check.value == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(check.pass);
  CHECK(check.slack == 1e-9);

  const auto fock = heisenberg_check(state_grid(FockStateSpec(1)));
  CHECK(fock.value == doctest::Approx(2.25).epsilon(1e-6));
  CHECK(fock.pass);

  // squeezing trades the factors but keeps the product at saturation
  const auto sq = heisenberg_check(state_grid(squeezed_vacuum_state(0.5)));
  CHECK(sq.value == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(sq.pass);
}

TEST_CASE("schroedinger-robertson determinant on exact grids") {
  CHECK(sr_check(state_grid(vacuum_state())).value ==
        doctest::Approx(0.25).epsilon(1e-6));
  CHECK(sr_check(state_grid(thermal_state(1.0))).value ==
        doctest::Approx(2.25).epsilon(1e-6));
  const auto cov = sr_check(moment_grid(1.0, 1.0, 0.5));
  CHECK(cov.value == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(cov.pass);
}

TEST_CASE("uncertainty function: saturation, thermal offset, rotation") {
  const auto vac = state_grid(vacuum_state());
  for (double theta : {0.0, kPi / 5, kPi / 2, 2.8})
    CHECK(std::abs(uncertainty_function(vac, theta).f) < 1e-9);

  CHECK(uncertainty_function(state_grid(thermal_state(1.0)), 0.0).f ==
        doctest::Approx(2.0).epsilon(1e-6));

  // pure squeezed states stay at saturation for every frame
  const auto sq = state_grid(squeezed_vacuum_state(0.5));
  CHECK(std::abs(uncertainty_function(sq, kPi / 6).f) < 1e-6);
}

TEST_CASE("f_scan: constancy and oracle values across shipped states") {
  struct Case {
    StateModel state;
    double expected;
  };
  const Case cases[] = {{vacuum_state(), 0.0},
                        {squeezed_vacuum_state(0.5), 0.0},
                        {thermal_state(1.0), 2.0},
                        {FockStateSpec(1), 2.0}};
  for (const auto& c : cases) {
    const auto report = f_scan(state_grid(c.state), scan24());
    REQUIRE(report.f_curve.size() == 24);
    double lo = report.f_curve[0].f, hi = lo;
    for (const auto& e : report.f_curve) {
      REQUIRE(e.ok());
      lo = std::min(lo, e.f);
      hi = std::max(hi, e.f);
      CHECK(e.f == doctest::Approx(c.expected).epsilon(1e-6));
    }
    CHECK(hi - lo < 1e-6);  // rotation invariance of the determinant
    CHECK(report.f_pass);
    CHECK(report.heisenberg.pass);
    CHECK(report.sr.pass);
  }
}

TEST_CASE("violation detection: the sub-heisenberg grid fails everything") {
  const auto bad = moment_grid(0.4, 0.4, 0.0);
  CHECK(validate(bad, 1e-6).pass);  // each row is a genuine density
  const auto report = f_scan(bad, scan24());
  CHECK(report.heisenberg.value == doctest::Approx(0.16).epsilon(1e-6));
  CHECK_FALSE(report.heisenberg.pass);
  CHECK(report.sr.value == doctest::Approx(0.16).epsilon(1e-6));
  CHECK_FALSE(report.sr.pass);
  for (const auto& e : report.f_curve)
    CHECK(e.f == doctest::Approx(-0.09).epsilon(1e-6));
  CHECK_FALSE(report.f_pass);
}

TEST_CASE("report identities hold with exact arithmetic") {
  for (const auto& grid :
       {state_grid(vacuum_state()), state_grid(thermal_state(1.0)),
        moment_grid(1.0, 1.0, 0.5), moment_grid(0.4, 0.4, 0.0)}) {
    const auto report = f_scan(grid, scan24());
    // determinant = product - covariance^2, same arithmetic
    const double qp = report.sigma_qp.value;
    CHECK(report.sr.value == report.heisenberg.value - qp * qp);
    // SR implies Heisenberg
    CHECK(report.heisenberg.value >= report.sr.value);
    // F(0) literally equals the determinant minus the bound
    CHECK(report.cross_check_ok);
    CHECK(report.f_at_zero == report.sr_minus_bound);
  }
}

TEST_CASE("missing phases: interpolation cap at pi/24") {
  // 10 rows over [0, pi): spacing pi/10 > pi/24, so off-row phases fail
  const auto coarse = exact_tomogram_grid(vacuum_state(), phase_scan(10),
                                          uniform_grid(-7.0, 7.0, 281));
  CHECK_NOTHROW(variance_at(coarse, kPi / 10));
  CHECK_THROWS_AS(variance_at(coarse, kPi / 10 + 0.05), AngleNotCoveredError);
  // 30 rows: spacing pi/30 < pi/24 allows interpolation everywhere
  const auto fine = exact_tomogram_grid(vacuum_state(), phase_scan(30),
                                        uniform_grid(-7.0, 7.0, 281));
  CHECK_NOTHROW(variance_at(fine, 0.123));
  CHECK(variance_at(fine, 0.123).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("sample-based estimates: vacuum within three bootstrap errors") {
  const auto samples = vacuum_samples(20000, 11);
  CheckConfig config;
  config.seed = 5;

  const auto var = variance_at(samples, 0.0, config);
  CHECK(var.source == DataSource::Samples);
  CHECK(var.standard_error > 0.0);
  CHECK(std::abs(var.value - 0.5) < 3.0 * var.standard_error);
  CHECK_FALSE(var.negative_warning);

  const auto heis = heisenberg_check(samples, config);
  CHECK(heis.standard_error > 0.0);
  CHECK(heis.slack == 3.0 * heis.standard_error);
  CHECK(std::abs(heis.value - 0.25) < heis.slack);
  CHECK(heis.pass);

  const auto sr = sr_check(samples, config);
  CHECK(std::abs(sr.value - 0.25) < sr.slack);
  CHECK(sr.pass);

  const auto f0 = uncertainty_function(samples, 0.0, config);
  CHECK(std::abs(f0.f) < 3.0 * f0.standard_error);

  // estimates are deterministic given the seed
  const auto again = heisenberg_check(samples, config);
  CHECK(again.value == heis.value);
  CHECK(again.standard_error == heis.standard_error);
}

TEST_CASE("sample-based f_scan: default scan, markers, cross-check") {
  const auto samples = vacuum_samples(5000, 21);
  CheckConfig config;
  config.seed = 9;
  config.min_samples = 1000;

  // only theta = 0 has all three required phases recorded
  const auto phases = eligible_scan_phases(samples);
  REQUIRE(phases.size() == 1);
  CHECK(phases[0] == doctest::Approx(0.0));

  const auto report = f_scan(samples, config);
  REQUIRE(report.f_curve.size() == 1);
  CHECK(report.f_curve[0].ok());
  CHECK(report.cross_check_ok);
  CHECK(report.f_at_zero == report.sr_minus_bound);

  // explicit scan with an unsampled angle yields a marker, not a failure
  const auto partial = f_scan(samples, {0.0, 0.3}, config);
  REQUIRE(partial.f_curve.size() == 2);
  CHECK(partial.f_curve[0].ok());
  CHECK_FALSE(partial.f_curve[1].ok());
  CHECK(partial.f_pass);  // judged on the angles that could be evaluated
  CHECK_FALSE(partial.warnings.empty());
}

TEST_CASE("insufficient samples propagate") {
  const auto samples = vacuum_samples(500, 31);
  CheckConfig config;  // default min_samples = 1000
  CHECK_THROWS_AS(variance_at(samples, 0.0, config),
                  InsufficientSamplesError);
  CHECK_THROWS_AS(heisenberg_check(samples, config),
                  InsufficientSamplesError);
  config.min_samples = 100;
  CHECK_NOTHROW(heisenberg_check(samples, config));
}

TEST_CASE("bootstrap errors shrink like one over sqrt(n)") {
  CheckConfig config;
  config.seed = 17;
  const auto se_n = variance_at(vacuum_samples(20000, 51), 0.0, config)
                        .standard_error;
  const auto se_2n = variance_at(vacuum_samples(40000, 52), 0.0, config)
                         .standard_error;
  const double ratio = se_n / se_2n;
  CHECK(ratio > std::sqrt(2.0) * 0.8);
  CHECK(ratio < std::sqrt(2.0) * 1.2);
}

}  // TEST_SUITE
