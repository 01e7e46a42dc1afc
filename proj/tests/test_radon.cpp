#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tomo/common.hpp"
#include "tomo/radon.hpp"
#include "tomo/tomogram.hpp"

using namespace tomo;

namespace {

Eigen::VectorXd default_xs() { return uniform_grid(-7.0, 7.0, 281); }
Eigen::VectorXd wigner_axis() { return uniform_grid(-6.0, 6.0, 241); }

double sup_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("radon") {

TEST_CASE("wigner grid: structure, integral, bilinear lookup") {
  const auto vac = exact_wigner_grid(vacuum_state(), wigner_axis(),
                                     wigner_axis());
  CHECK(wigner_integral(vac) == doctest::Approx(kTwoPi).epsilon(1e-9));
  CHECK(wigner_at(vac, 0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(wigner_at(vac, 0.025, 0.0) ==
        doctest::Approx(2.0 * std::exp(-0.025 * 0.025)).epsilon(1e-3));
  CHECK(wigner_at(vac, 100.0, 0.0) == 0.0);

  Eigen::VectorXd bad = wigner_axis();
  bad(5) += 1e-3;
  CHECK_THROWS_AS(WignerGrid(bad, wigner_axis(),
                             Eigen::MatrixXd::Zero(241, 241)),
                  FormatError);
  CHECK_THROWS_AS(WignerGrid(wigner_axis(), wigner_axis(),
                             Eigen::MatrixXd::Zero(7, 241)),
                  FormatError);
}

TEST_CASE("forward radon reproduces the exact tomograms") {
  const Eigen::VectorXd thetas = phase_scan(48);
  const Eigen::VectorXd xs = default_xs();

  const auto vac_w = exact_wigner_grid(vacuum_state(), wigner_axis(),
                                       wigner_axis());
  const auto vac_fwd = forward_radon(vac_w, thetas, xs);
  const auto vac_ref = exact_tomogram_grid(vacuum_state(), thetas, xs);
  CHECK(sup_diff(vac_fwd.grid.w, vac_ref.w) < 1e-6);
  CHECK(vac_fwd.row_defects.maxCoeff() < 1e-6);

  const auto f1_w = exact_wigner_grid(FockStateSpec(1), wigner_axis(),
                                      wigner_axis());
  const auto f1_fwd = forward_radon(f1_w, thetas, xs);
  const auto f1_ref = exact_tomogram_grid(FockStateSpec(1), thetas, xs);
  CHECK(sup_diff(f1_fwd.grid.w, f1_ref.w) < 1e-4);

  const auto coh_w = exact_wigner_grid(coherent_state(1.0, 0.0), wigner_axis(),
                                       wigner_axis());
  const auto coh_fwd = forward_radon(coh_w, thetas, xs);
  const auto coh_ref = exact_tomogram_grid(coherent_state(1.0, 0.0), thetas, xs);
  CHECK(sup_diff(coh_fwd.grid.w, coh_ref.w) < 1e-5);
}

TEST_CASE("forward radon: all-zero grid is flagged, not fixed") {
  const WignerGrid zeros(wigner_axis(), wigner_axis(),
                         Eigen::MatrixXd::Zero(241, 241));
  const auto result = forward_radon(zeros, phase_scan(12), default_xs());
  CHECK(result.grid.w.cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < result.row_defects.size(); ++i)
    CHECK(result.row_defects(i) == doctest::Approx(1.0));
  CHECK_FALSE(validate(result.grid, 1e-6).pass);
}

TEST_CASE("forward radon rejects truncated supports") {
  const auto tight = exact_wigner_grid(vacuum_state(),
                                       uniform_grid(-1.5, 1.5, 61),
                                       uniform_grid(-1.5, 1.5, 61));
  CHECK_THROWS_AS(forward_radon(tight, phase_scan(12), default_xs()),
                  SupportTruncatedError);
}

TEST_CASE("inverse radon: vacuum and fock peaks with normalization") {
  const auto vac = exact_tomogram_grid(vacuum_state(), phase_scan(48),
                                       default_xs());
  const auto rec = inverse_radon(vac, wigner_axis(), wigner_axis());
  CHECK(rec.wigner.w(120, 120) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(rec.normalization_defect < 0.01);
  CHECK(rec.distinct_angles == 48);
  CHECK(rec.filter == "ramp");
  CHECK(rec.cutoff == doctest::Approx(0.9 * kPi / vac.dx()));

  const auto f1 = exact_tomogram_grid(FockStateSpec(1), phase_scan(48),
                                      default_xs());
  const auto rec1 = inverse_radon(f1, wigner_axis(), wigner_axis());
  // negativity at the origin is the non-classical signature
  CHECK(rec1.wigner.w(120, 120) == doctest::Approx(-2.0).epsilon(0.025));
  CHECK(rec1.wigner.w.minCoeff() < -1.9);
  CHECK(rec1.normalization_defect < 0.01);
}

TEST_CASE("round trips on every shipped gaussian state") {
  const Eigen::VectorXd thetas = phase_scan(48);
  const Eigen::VectorXd xs = default_xs();
  for (const auto& state :
       {StateModel(vacuum_state()), StateModel(coherent_state(1.0, 0.0)),
        StateModel(squeezed_vacuum_state(0.5)),
        StateModel(thermal_state(1.0))}) {
    // tomogram -> wigner -> tomogram
    const auto t = exact_tomogram_grid(state, thetas, xs);
    const auto w = inverse_radon(t, wigner_axis(), wigner_axis());
    const auto t2 = forward_radon(w.wigner, thetas, xs);
    CHECK(sup_diff(t2.grid.w, t.w) < 1e-2);

    // wigner -> tomogram -> wigner
    const auto w0 = exact_wigner_grid(state, wigner_axis(), wigner_axis());
    const auto t0 = forward_radon(w0, thetas, xs);
    const auto w1 = inverse_radon(t0.grid, wigner_axis(), wigner_axis());
    CHECK(sup_diff(w1.wigner.w, w0.w) < 1e-2);
  }
}

TEST_CASE("rotating the theta labels rotates the reconstruction") {
  const Eigen::VectorXd xs = default_xs();
  const Eigen::VectorXd thetas = phase_scan(48);
  const auto base = exact_tomogram_grid(coherent_state(1.0, 0.0), thetas, xs);

  const double delta = kPi / 3.0;
  Eigen::VectorXd shifted = thetas.array() + delta;
  const OpticalTomogramGrid rotated(shifted, xs, base.w);

  const auto rec = inverse_radon(rotated, wigner_axis(), wigner_axis());
  Eigen::Index iq = 0, jp = 0;
  rec.wigner.w.maxCoeff(&iq, &jp);
  const double m = std::sqrt(2.0);
  CHECK(rec.wigner.qs(iq) ==
        doctest::Approx(m * std::cos(delta)).epsilon(0.05));
  CHECK(rec.wigner.ps(jp) ==
        doctest::Approx(m * std::sin(delta)).epsilon(0.05));
  CHECK(rec.wigner.w(iq, jp) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("filtered back-projection is linear") {
  const Eigen::VectorXd thetas = phase_scan(16);
  const Eigen::VectorXd xs = default_xs();
  const auto a = exact_tomogram_grid(vacuum_state(), thetas, xs);
  const auto b = exact_tomogram_grid(thermal_state(1.0), thetas, xs);
  const double lambda = 0.3;
  const OpticalTomogramGrid mix(thetas, xs,
                                lambda * a.w + (1.0 - lambda) * b.w);
  const auto rec_mix = inverse_radon(mix, wigner_axis(), wigner_axis());
  const auto rec_a = inverse_radon(a, wigner_axis(), wigner_axis());
  const auto rec_b = inverse_radon(b, wigner_axis(), wigner_axis());
  const Eigen::MatrixXd combo =
      lambda * rec_a.wigner.w + (1.0 - lambda) * rec_b.wigner.w;
  CHECK(sup_diff(rec_mix.wigner.w, combo) < 1e-10);
}

TEST_CASE("angle coverage requirements") {
  const Eigen::VectorXd xs = default_xs();
  // three angles: not enough projections
  const auto three = exact_tomogram_grid(vacuum_state(), phase_scan(3), xs);
  CHECK_THROWS_AS(inverse_radon(three, wigner_axis(), wigner_axis()),
                  InsufficientAnglesError);
  // twelve angles crammed into [0, pi/2]: a gap bigger than pi/8 remains
  Eigen::VectorXd half(12);
  for (int k = 0; k < 12; ++k) half(k) = k * kPi / 24.0;
  const auto sector = exact_tomogram_grid(vacuum_state(), half, xs);
  CHECK_THROWS_AS(inverse_radon(sector, wigner_axis(), wigner_axis()),
                  AngleNotCoveredError);
  // rows over the full circle fold onto [0, pi) and work
  Eigen::VectorXd full(32);
  for (int k = 0; k < 32; ++k) full(k) = k * kTwoPi / 32.0;
  const auto circle = exact_tomogram_grid(vacuum_state(), full, xs);
  const auto rec = inverse_radon(circle, wigner_axis(), wigner_axis());
  CHECK(rec.distinct_angles == 16);
  CHECK(rec.n_projections == 32);
  CHECK(rec.wigner.w(120, 120) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("cosine apodization dampens but preserves the peak scale") {
  const auto vac = exact_tomogram_grid(vacuum_state(), phase_scan(48),
                                       default_xs());
  InverseRadonOptions opt;
  opt.cosine_apodization = true;
  const auto rec = inverse_radon(vac, wigner_axis(), wigner_axis(), opt);
  CHECK(rec.filter == "ramp-cosine");
  CHECK(rec.wigner.w(120, 120) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("direct evaluation of the inversion integral matches FBP") {
  // tiny 9x9 output; the oracle integrates over the (mu, nu) disc directly
  const auto vac = exact_tomogram_grid(vacuum_state(), phase_scan(48),
                                       default_xs());
  const double radius = 20.0;
  const oracle::WignerTripleIntegral direct(vac, radius, 280);

  InverseRadonOptions opt;
  opt.cutoff = radius;
  const Eigen::VectorXd axis = uniform_grid(-1.0, 1.0, 9);
  const auto fbp = inverse_radon(vac, axis, axis, opt);

  for (Eigen::Index i = 0; i < 9; ++i) {
    for (Eigen::Index j = 0; j < 9; ++j) {
      const double reference = direct(axis(i), axis(j));
      const double got = fbp.wigner.w(i, j);
      CHECK(std::abs(got - reference) <=
            0.05 * std::max(std::abs(reference), std::abs(got)));
    }
  }
}

}  // TEST_SUITE
