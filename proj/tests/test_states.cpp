#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomo/common.hpp"
#include "tomo/states.hpp"

using namespace tomo;

namespace {

std::vector<StateModel> shipped_states() {
  return {vacuum_state(),
          coherent_state(1.0, 0.0),
          coherent_state(0.3, -0.7),
          squeezed_vacuum_state(0.5),
          squeezed_vacuum_state(0.8, 1.1),
          thermal_state(1.0),
          StateModel(FockStateSpec(0)),
          StateModel(FockStateSpec(1)),
          StateModel(FockStateSpec(2)),
          StateModel(FockStateSpec(5))};
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("tomogram density: frozen spot values") {
  const StateModel vac = vacuum_state();
  // normal density with variance 1/2 at its mean: 1/sqrt(pi)
  CHECK(tomogram_density(vac, 0.0, 0.0) ==
        doctest::Approx(0.5641895835477563).epsilon(1e-13));
  // |psi_0|^2 is the vacuum Gaussian, at any phase
  const StateModel fock0 = FockStateSpec(0);
  CHECK(tomogram_density(fock0, 0.0, 0.0) ==
        doctest::Approx(0.5641895835477563).epsilon(1e-13));
  CHECK(tomogram_density(fock0, 1.234, 0.0) ==
        doctest::Approx(0.5641895835477563).epsilon(1e-13));
  // |psi_1(1)|^2 = 2 e^{-1} / sqrt(pi), frozen from the Hermite oracle
  const StateModel fock1 = FockStateSpec(1);
  CHECK(tomogram_density(fock1, 0.0, 1.0) ==
        doctest::Approx(0.4151074974205947).epsilon(1e-13));
  CHECK(tomogram_density(fock1, 0.0, 1.0) ==
        doctest::Approx(oracle::psi_sq(1, 1.0)).epsilon(1e-13));
}

TEST_CASE("hermite recurrence matches the std::hermite oracle") {
  for (int n : {0, 1, 2, 3, 5, 8, 13, 20}) {
    for (double x : {-5.5, -2.0, -0.7, 0.0, 0.4, 1.0, 3.3, 6.9}) {
      const double h = hermite_function(n, x);
      CHECK(h * h == doctest::Approx(oracle::psi_sq(n, x)).epsilon(1e-11));
    }
  }
}

TEST_CASE("tomogram rows integrate to one for every state and phase") {
  for (const auto& state : shipped_states()) {
    for (double theta : {0.0, 0.3, kPi / 4, 1.9, kPi, 5.1}) {
      const double mass = oracle::integrate(
          [&](double x) { return tomogram_density(state, theta, x); }, -12.0,
          12.0, 4000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
      // densities are non-negative
      for (double x : {-3.0, -0.5, 0.0, 1.7})
        CHECK(tomogram_density(state, theta, x) >= 0.0);
    }
  }
}

TEST_CASE("gaussian tomogram moments equal the projected covariance") {
  for (const auto& state :
       {StateModel(coherent_state(1.0, -0.5)),
        StateModel(squeezed_vacuum_state(0.5)),
        StateModel(GaussianStateSpec(0.4, -0.2, 1.0, 1.0, 0.5))}) {
    const Eigen::Vector2d mean = exact_mean(state);
    const Eigen::Matrix2d cov = exact_covariance(state);
    for (double theta : {0.0, 0.7, kPi / 4, 2.5}) {
      const double m1 = oracle::integrate(
          [&](double x) { return x * tomogram_density(state, theta, x); },
          -14.0, 14.0, 6000);
      const double m2 = oracle::integrate(
          [&](double x) { return x * x * tomogram_density(state, theta, x); },
          -14.0, 14.0, 6000);
      CHECK(m1 == doctest::Approx(projected_mean(mean, theta)).epsilon(1e-9));
      CHECK(m2 - m1 * m1 ==
            doctest::Approx(projected_variance(cov, theta)).epsilon(1e-9));
    }
  }
}

TEST_CASE("fock tomograms are phase invariant") {
  const StateModel fock3 = FockStateSpec(3);
  for (double x : {-2.2, 0.0, 0.9, 4.0}) {
    const double base = tomogram_density(fock3, 0.0, x);
    for (double phi : {0.1, 1.0, kPi / 2, 4.0})
      CHECK(tomogram_density(fock3, phi, x) == base);
  }
}

TEST_CASE("reflection symmetry: density(theta + pi, x) = density(theta, -x)") {
  for (const auto& state : shipped_states()) {
    for (double theta : {0.0, 0.4, kPi / 3, 2.0}) {
      for (double x : {-1.5, -0.3, 0.0, 0.8, 2.4}) {
        CHECK(tomogram_density(state, theta + kPi, x) ==
              doctest::Approx(tomogram_density(state, theta, -x))
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("physicality is rejected at construction") {
  CHECK_THROWS_AS(GaussianStateSpec(0, 0, 0.4, 0.4, 0.0), PhysicalityError);
  CHECK_THROWS_AS(GaussianStateSpec(0, 0, -0.5, 0.5, 0.0), PhysicalityError);
  CHECK_THROWS_AS(GaussianStateSpec(0, 0, 0.5, 0.0, 0.0), PhysicalityError);
  CHECK_THROWS_AS(GaussianStateSpec(0, 0, 1.0, 1.0, 0.9), PhysicalityError);
  CHECK_THROWS_AS(FockStateSpec(-1), PhysicalityError);
  CHECK_THROWS_AS(thermal_state(-0.1), PhysicalityError);
  // the saturated bound is physical
  CHECK_NOTHROW(GaussianStateSpec(0, 0, 0.5, 0.5, 0.0));
  CHECK_NOTHROW(GaussianStateSpec(1, -1, 1.0, 0.5, 0.5));
  CHECK_NOTHROW(squeezed_vacuum_state(1.0, 0.3));
}

TEST_CASE("exact covariance oracle values") {
  const Eigen::Matrix2d vac = exact_covariance(vacuum_state());
  CHECK(vac(0, 0) == 0.5);
  CHECK(vac(1, 1) == 0.5);
  CHECK(vac(0, 1) == 0.0);

  // fock n = 1: quadrature of the density against x^2 gives 3/2
  const StateModel fock1 = FockStateSpec(1);
  const double m2 = oracle::integrate(
      [&](double x) { return x * x * tomogram_density(fock1, 0.0, x); }, -12.0,
      12.0, 4000);
  CHECK(m2 == doctest::Approx(1.5).epsilon(1e-10));
  const Eigen::Matrix2d f1 = exact_covariance(fock1);
  CHECK(f1(0, 0) == doctest::Approx(1.5));
  CHECK(f1(1, 1) == doctest::Approx(1.5));
  CHECK(f1(0, 1) == 0.0);

  const Eigen::Matrix2d th = exact_covariance(thermal_state(1.0));
  CHECK(th(0, 0) == doctest::Approx(1.5));
  CHECK(th(1, 1) == doctest::Approx(1.5));

  // squeezed with rotation: recompute the rotated diagonal directly
  const GaussianStateSpec sq = squeezed_vacuum_state(0.5, 0.7);
  const double c = std::cos(0.7), s = std::sin(0.7);
  const double vq = 0.5 * std::exp(-1.0), vp = 0.5 * std::exp(1.0);
  CHECK(sq.sigma_qq == doctest::Approx(c * c * vq + s * s * vp).epsilon(1e-14));
  CHECK(sq.sigma_pp == doctest::Approx(s * s * vq + c * c * vp).epsilon(1e-14));
  CHECK(sq.sigma_qp == doctest::Approx(c * s * (vq - vp)).epsilon(1e-14));
}

TEST_CASE("exact wigner: values, tails, normalization") {
  const StateModel vac = vacuum_state();
  CHECK(exact_wigner(vac, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(exact_wigner(vac, 10.0, 10.0) < 1e-80);

  const StateModel fock1 = FockStateSpec(1);
  CHECK(exact_wigner(fock1, 0.0, 0.0) == doctest::Approx(-2.0).epsilon(1e-13));

  // gaussian wigner values are strictly positive
  for (const auto& state :
       {StateModel(vacuum_state()), StateModel(coherent_state(1.0, 0.5)),
        StateModel(squeezed_vacuum_state(0.7, 0.2)),
        StateModel(thermal_state(2.0))}) {
    for (double q : {-2.0, 0.0, 1.5})
      for (double p : {-1.0, 0.0, 2.0}) CHECK(exact_wigner(state, q, p) > 0.0);
  }

  // integral over the plane equals 2*pi (iterated Simpson oracle)
  for (const auto& state :
       {StateModel(vacuum_state()), StateModel(coherent_state(1.0, 0.0)),
        StateModel(FockStateSpec(1)), StateModel(thermal_state(1.0))}) {
    const double integral = oracle::integrate(
        [&](double q) {
          return oracle::integrate(
              [&](double p) { return exact_wigner(state, q, p); }, -9.0, 9.0,
              600);
        },
        -9.0, 9.0, 600);
    CHECK(integral == doctest::Approx(kTwoPi).epsilon(1e-8));
  }
}

TEST_CASE("line integrals of the wigner function reproduce the tomogram") {
  // the defining identity, checked by brute-force quadrature
  for (const auto& state :
       {StateModel(vacuum_state()), StateModel(coherent_state(1.0, 0.0)),
        StateModel(squeezed_vacuum_state(0.5)), StateModel(FockStateSpec(1)),
        StateModel(FockStateSpec(2))}) {
    for (double theta : {0.0, kPi / 5, kPi / 2, 2.2}) {
      for (double x : {0.0, 0.7, -1.3}) {
        CHECK(oracle::projection(state, theta, x) ==
              doctest::Approx(tomogram_density(state, theta, x))
                  .epsilon(1e-8));
      }
    }
  }
}

}  // TEST_SUITE
