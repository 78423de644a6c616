#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "elsgd/numeric.hpp"

namespace elsgd {

/// p(t) = c4 t^4 + c3 t^3 + c2 t^2 + c1 t + c0.
struct QuarticPoly {
  double c4 = 0.0;
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  double operator()(double t) const { return (((c4 * t + c3) * t + c2) * t + c1) * t + c0; }
  double derivative(double t) const { return ((4.0 * c4 * t + 3.0 * c3) * t + 2.0 * c2) * t + c1; }

  /// Degree of the highest nonzero coefficient (0 for a constant).
  int degree() const;

  /// (q0 + q1 t + q2 t^2)^2.
  static QuarticPoly square_of_quadratic(double q0, double q1, double q2);

  QuarticPoly& operator+=(const QuarticPoly& o);
  QuarticPoly operator*(double k) const;
};

struct LineSearchResult {
  double t_star = 0.0;
  double p_at_t = 0.0;
  std::vector<double> candidates;  // 0 and every nonnegative stationary point
};

/// Real roots of c3 t^3 + c2 t^2 + c1 t + c0 (lower degree when leading
/// coefficients vanish), sorted ascending, each polished by Newton steps.
std::vector<double> real_roots_cubic(double c3, double c2, double c1, double c0);

/// Global minimizer of q over t >= 0. Ties go to the smaller t.
/// Throws std::invalid_argument when q is unbounded below on t >= 0
/// (leading nonzero coefficient negative).
LineSearchResult minimize_quartic_nonneg(const QuarticPoly& q);

}  // namespace elsgd
