#include "tomo/radon.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "tomo/common.hpp"

namespace tomo {

namespace {

void check_uniform(const Eigen::VectorXd& v, const char* name) {
  if (v.size() < 2) throw FormatError(std::string(name) + " needs >= 2 nodes");
  const double d0 = v(1) - v(0);
  if (d0 <= 0.0)
    throw FormatError(std::string(name) + " must be strictly increasing");
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    const double d = v(i) - v(i - 1);
    if (std::abs(d / d0 - 1.0) > 1e-12)
      throw FormatError(std::string(name) + " must be uniformly spaced");
  }
}

// Natural cubic spline second derivatives on a uniform grid (Thomas solve).
Eigen::VectorXd spline_second_derivs(const Eigen::Ref<const Eigen::VectorXd>& y,
                                     double h) {
  const Eigen::Index n = y.size();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
  if (n < 3) return m;
  const Eigen::Index k = n - 2;  // interior unknowns
  Eigen::VectorXd diag(k), rhs(k);
  for (Eigen::Index i = 0; i < k; ++i)
    rhs(i) = 6.0 * (y(i) - 2.0 * y(i + 1) + y(i + 2)) / (h * h);
  diag(0) = 4.0;
  for (Eigen::Index i = 1; i < k; ++i) {
    const double f = 1.0 / diag(i - 1);
    diag(i) = 4.0 - f;
    rhs(i) -= f * rhs(i - 1);
  }
  m(k) = rhs(k - 1) / diag(k - 1);
  for (Eigen::Index i = k - 1; i >= 1; --i)
    m(i) = (rhs(i - 1) - m(i + 1)) / diag(i - 1);
  return m;
}

// Cubic spline evaluation; 0 outside the grid.
double spline_eval(const Eigen::Ref<const Eigen::VectorXd>& y,
                   const Eigen::VectorXd& m, double x0, double h, double x) {
  const Eigen::Index n = y.size();
  const double t = (x - x0) / h;
  if (t < 0.0 || t > static_cast<double>(n - 1)) return 0.0;
  auto i = static_cast<Eigen::Index>(t);
  if (i >= n - 1) i = n - 2;
  const double u = x - (x0 + i * h);
  const double b = (y(i + 1) - y(i)) / h - h * (2.0 * m(i) + m(i + 1)) / 6.0;
  return y(i) + u * (b + u * (0.5 * m(i) + u * (m(i + 1) - m(i)) / (6.0 * h)));
}

double fold_pi(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

// Linear interpolation of a filtered projection; 0 outside.
double lerp_row(const Eigen::VectorXd& g, double x0, double dx, double x) {
  const Eigen::Index n = g.size();
  const double t = (x - x0) / dx;
  if (t < 0.0 || t > static_cast<double>(n - 1)) return 0.0;
  const auto i = static_cast<Eigen::Index>(t);
  if (i >= n - 1) return g(n - 1);
  const double f = t - static_cast<double>(i);
  return (1.0 - f) * g(i) + f * g(i + 1);
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

WignerGrid::WignerGrid(Eigen::VectorXd qs_, Eigen::VectorXd ps_,
                       Eigen::MatrixXd w_)
    : qs(std::move(qs_)), ps(std::move(ps_)), w(std::move(w_)) {
  check_uniform(qs, "wigner qs");
  check_uniform(ps, "wigner ps");
  if (w.rows() != qs.size() || w.cols() != ps.size())
    throw FormatError("wigner grid shape mismatch");
}

double wigner_integral(const WignerGrid& grid) {
  Eigen::VectorXd wq = Eigen::VectorXd::Ones(grid.qs.size());
  Eigen::VectorXd wp = Eigen::VectorXd::Ones(grid.ps.size());
  wq(0) = wq(wq.size() - 1) = 0.5;
  wp(0) = wp(wp.size() - 1) = 0.5;
  return wq.dot(grid.w * wp) * grid.dq() * grid.dp();
}

double wigner_at(const WignerGrid& grid, double q, double p) {
  const double tq = (q - grid.qs(0)) / grid.dq();
  const double tp = (p - grid.ps(0)) / grid.dp();
  const auto nq = grid.qs.size(), np = grid.ps.size();
  if (tq < 0.0 || tq > static_cast<double>(nq - 1) || tp < 0.0 ||
      tp > static_cast<double>(np - 1))
    return 0.0;
  auto i = static_cast<Eigen::Index>(tq);
  auto j = static_cast<Eigen::Index>(tp);
  if (i >= nq - 1) i = nq - 2;
  if (j >= np - 1) j = np - 2;
  const double fq = tq - static_cast<double>(i);
  const double fp = tp - static_cast<double>(j);
  return (1.0 - fq) * ((1.0 - fp) * grid.w(i, j) + fp * grid.w(i, j + 1)) +
         fq * ((1.0 - fp) * grid.w(i + 1, j) + fp * grid.w(i + 1, j + 1));
}

ForwardRadonResult forward_radon(const WignerGrid& wigner,
                                 const Eigen::VectorXd& thetas,
                                 const Eigen::VectorXd& xs,
                                 const ForwardRadonOptions& options) {
  const Eigen::Index nq = wigner.qs.size(), np = wigner.ps.size();
  double boundary = wigner.w.row(0).cwiseAbs().maxCoeff();
  boundary = std::max(boundary, wigner.w.row(nq - 1).cwiseAbs().maxCoeff());
  boundary = std::max(boundary, wigner.w.col(0).cwiseAbs().maxCoeff());
  boundary = std::max(boundary, wigner.w.col(np - 1).cwiseAbs().maxCoeff());
  if (boundary > options.boundary_tol)
    throw SupportTruncatedError(boundary, options.boundary_tol);

  const double dq = wigner.dq(), dp = wigner.dp();

  // materialized rows/columns with their spline coefficients
  std::vector<Eigen::VectorXd> rows(nq), cols(np), p_splines(nq), q_splines(np);
  for (Eigen::Index i = 0; i < nq; ++i) {
    rows[i] = wigner.w.row(i).transpose();
    p_splines[i] = spline_second_derivs(rows[i], dp);
  }
  for (Eigen::Index j = 0; j < np; ++j) {
    cols[j] = wigner.w.col(j);
    q_splines[j] = spline_second_derivs(cols[j], dq);
  }

  Eigen::MatrixXd out(thetas.size(), xs.size());
  for (Eigen::Index t = 0; t < thetas.size(); ++t) {
    const double c = std::cos(thetas(t)), s = std::sin(thetas(t));
    if (std::abs(s) >= std::abs(c)) {
      // walk q nodes, interpolate along p at p*(q) = (X - q c) / s
      for (Eigen::Index a = 0; a < xs.size(); ++a) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < nq; ++i) {
          const double pstar = (xs(a) - wigner.qs(i) * c) / s;
          const double v =
              spline_eval(rows[i], p_splines[i], wigner.ps(0), dp, pstar);
          acc += (i == 0 || i == nq - 1) ? 0.5 * v : v;
        }
        out(t, a) = acc * dq / (kTwoPi * std::abs(s));
      }
    } else {
      // walk p nodes, interpolate along q at q*(p) = (X - p s) / c
      for (Eigen::Index a = 0; a < xs.size(); ++a) {
        double acc = 0.0;
        for (Eigen::Index j = 0; j < np; ++j) {
          const double qstar = (xs(a) - wigner.ps(j) * s) / c;
          const double v =
              spline_eval(cols[j], q_splines[j], wigner.qs(0), dq, qstar);
          acc += (j == 0 || j == np - 1) ? 0.5 * v : v;
        }
        out(t, a) = acc * dp / (kTwoPi * std::abs(c));
      }
    }
  }

  ForwardRadonResult result{OpticalTomogramGrid(thetas, xs, std::move(out)),
                            Eigen::VectorXd(thetas.size())};
  for (Eigen::Index t = 0; t < thetas.size(); ++t)
    result.row_defects(t) =
        std::abs(trapezoid(result.grid.w.row(t), result.grid.dx()) - 1.0);
  return result;
}

InverseRadonResult inverse_radon(const OpticalTomogramGrid& grid,
                                 const Eigen::VectorXd& qs,
                                 const Eigen::VectorXd& ps,
                                 const InverseRadonOptions& options) {
  check_uniform(qs, "wigner qs");
  check_uniform(ps, "wigner ps");
  if (grid.n_xs() < 2) throw FormatError("tomogram grid too small to filter");

  const Eigen::Index n_rows = grid.n_thetas();
  std::vector<double> folded(static_cast<std::size_t>(n_rows));
  for (Eigen::Index i = 0; i < n_rows; ++i) folded[i] = fold_pi(grid.thetas(i));
  std::sort(folded.begin(), folded.end());
  int distinct = 0;
  // the largest angular hole, including the wrap-around from the last
  // folded angle back to the first one plus pi
  double max_gap = folded.front() + kPi - folded.back();
  double gap_center = folded.back() + 0.5 * max_gap;
  for (std::size_t i = 0; i < folded.size(); ++i) {
    if (i == 0 || folded[i] - folded[i - 1] > 1e-9) ++distinct;
    if (i > 0 && folded[i] - folded[i - 1] > max_gap) {
      max_gap = folded[i] - folded[i - 1];
      gap_center = 0.5 * (folded[i] + folded[i - 1]);
    }
  }
  if (distinct < options.min_angles)
    throw InsufficientAnglesError(distinct, options.min_angles);
  if (max_gap > kPi / 8.0 + 1e-9) throw AngleNotCoveredError(gap_center);

  const double dx = grid.dx();
  const double nyquist = kPi / dx;
  const double cutoff = options.cutoff.value_or(options.cutoff_fraction * nyquist);
  if (!(cutoff > 0.0)) throw FormatError("filter cutoff must be positive");

  // generous zero padding: the ramp kernel's 1/x^2 tails alias around the
  // FFT circle and show up as a constant offset in the reconstruction
  const Eigen::Index n = grid.n_xs();
  const int m = next_pow2(std::max<int>(8 * static_cast<int>(n), 1024));

  // ramp response 2*pi*|omega| with a hard cutoff, optionally apodized
  Eigen::VectorXd ramp(m);
  for (int k = 0; k < m; ++k) {
    const double f = (k <= m / 2) ? static_cast<double>(k) / m
                                  : static_cast<double>(k - m) / m;
    const double omega = kTwoPi * f / dx;
    double h = (std::abs(omega) <= cutoff) ? kTwoPi * std::abs(omega) : 0.0;
    if (options.cosine_apodization && h > 0.0)
      h *= std::cos(0.5 * kPi * omega / cutoff);
    ramp(k) = h;
  }

  Eigen::FFT<double> fft;
  std::vector<Eigen::VectorXd> filtered(static_cast<std::size_t>(n_rows));
  std::vector<double> padded(static_cast<std::size_t>(m), 0.0);
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    std::fill(padded.begin(), padded.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) padded[j] = grid.w(i, j);
    fft.fwd(spectrum, padded);
    for (int k = 0; k < m; ++k) spectrum[k] *= ramp(k);
    fft.inv(padded, spectrum);
    filtered[i] = Eigen::Map<const Eigen::VectorXd>(padded.data(), n);
  }

  // back-projection, theta weight pi / n_rows; rows at theta in [pi, 2pi)
  // enter through their own angle, which realizes the reflection identity
  const double weight = kPi / static_cast<double>(n_rows) / kTwoPi;
  Eigen::VectorXd cths(n_rows), sths(n_rows);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    cths(i) = std::cos(grid.thetas(i));
    sths(i) = std::sin(grid.thetas(i));
  }
  Eigen::MatrixXd w(qs.size(), ps.size());
  for (Eigen::Index a = 0; a < qs.size(); ++a) {
    for (Eigen::Index b = 0; b < ps.size(); ++b) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n_rows; ++i) {
        const double u = qs(a) * cths(i) + ps(b) * sths(i);
        acc += lerp_row(filtered[i], grid.xs(0), dx, u);
      }
      w(a, b) = acc * weight;
    }
  }

  InverseRadonResult result;
  result.wigner = WignerGrid(qs, ps, std::move(w));
  result.cutoff = cutoff;
  result.n_projections = static_cast<int>(n_rows);
  result.distinct_angles = distinct;
  result.max_theta_gap = max_gap;
  result.filter = options.cosine_apodization ? "ramp-cosine" : "ramp";
  result.normalization_defect =
      std::abs(wigner_integral(result.wigner) / kTwoPi - 1.0);
  return result;
}

WignerGrid exact_wigner_grid(const StateModel& state, const Eigen::VectorXd& qs,
                             const Eigen::VectorXd& ps) {
  Eigen::MatrixXd w(qs.size(), ps.size());
  for (Eigen::Index i = 0; i < qs.size(); ++i)
    for (Eigen::Index j = 0; j < ps.size(); ++j)
      w(i, j) = exact_wigner(state, qs(i), ps(j));
  return {qs, ps, std::move(w)};
}

}  // namespace tomo
