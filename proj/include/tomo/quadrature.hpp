#pragma once

#include <Eigen/Dense>

namespace tomo {

enum class QuadRule { Trapezoid, Simpson };

/// Trapezoid rule over uniformly spaced samples.  Accepts any dense Eigen
/// expression, so callers can pass e.g. `xs.square() * row` unevaluated.
template <class Derived>
double trapezoid(const Eigen::DenseBase<Derived>& y, double dx) {
  const auto& v = y.derived();
  const Eigen::Index n = v.size();
  if (n < 2) return 0.0;
  return (v.sum() - 0.5 * (v(0) + v(n - 1))) * dx;
}

/// Composite Simpson rule.  Even sample counts use Simpson on the leading
/// odd-length run and close the last panel with a trapezoid.
template <class Derived>
double simpson(const Eigen::DenseBase<Derived>& y, double dx) {
  const auto& v = y.derived();
  const Eigen::Index n = v.size();
  if (n < 3) return trapezoid(y, dx);
  const Eigen::Index m = (n % 2 == 1) ? n : n - 1;
  double sum = v(0) + v(m - 1);
  for (Eigen::Index i = 1; i + 1 < m; ++i) sum += v(i) * (i % 2 == 1 ? 4.0 : 2.0);
  double out = sum * dx / 3.0;
  if (m != n) out += 0.5 * (v(n - 2) + v(n - 1)) * dx;
  return out;
}

template <class Derived>
double integrate(const Eigen::DenseBase<Derived>& y, double dx, QuadRule rule) {
  return rule == QuadRule::Simpson ? simpson(y, dx) : trapezoid(y, dx);
}

}  // namespace tomo
