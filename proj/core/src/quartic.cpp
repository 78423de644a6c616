#include "elsgd/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace elsgd {
namespace {

constexpr double kNearDoubleRoot = 1e-12;

double cubic_at(double c3, double c2, double c1, double c0, double t) {
  return ((c3 * t + c2) * t + c1) * t + c0;
}

double polish(double c3, double c2, double c1, double c0, double t) {
  for (int it = 0; it < 4; ++it) {
    const double f = cubic_at(c3, c2, c1, c0, t);
    const double df = (3.0 * c3 * t + 2.0 * c2) * t + c1;
    if (f == 0.0 || df == 0.0 || !std::isfinite(df)) break;
    const double next = t - f / df;
    if (!std::isfinite(next)) break;
    // Keep the Newton step only if it does not increase the residual.
    if (std::abs(cubic_at(c3, c2, c1, c0, next)) > std::abs(f)) break;
    t = next;
  }
  return t;
}

std::vector<double> quadratic_roots(double a, double b, double c) {
  if (a == 0.0) {
    if (b == 0.0) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  if (disc == 0.0) return {-b / (2.0 * a)};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r{q / a};
  if (q != 0.0) r.push_back(c / q);
  else r.push_back(0.0);
  return r;
}

std::vector<double> companion_roots(double b, double c, double d) {
  Eigen::Matrix3d comp;
  comp << -b, -c, -d,
          1.0, 0.0, 0.0,
          0.0, 1.0, 0.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(comp, false);
  std::vector<double> out;
  const double scale = std::max({1.0, std::abs(b), std::sqrt(std::abs(c)), std::cbrt(std::abs(d))});
  for (int i = 0; i < 3; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-6 * scale) out.push_back(z.real());
  }
  return out;
}

}  // namespace

int QuarticPoly::degree() const {
  if (c4 != 0.0) return 4;
  if (c3 != 0.0) return 3;
  if (c2 != 0.0) return 2;
  if (c1 != 0.0) return 1;
  return 0;
}

QuarticPoly QuarticPoly::square_of_quadratic(double q0, double q1, double q2) {
  return QuarticPoly{q2 * q2, 2.0 * q1 * q2, q1 * q1 + 2.0 * q0 * q2, 2.0 * q0 * q1, q0 * q0};
}

QuarticPoly& QuarticPoly::operator+=(const QuarticPoly& o) {
  c4 += o.c4;
  c3 += o.c3;
  c2 += o.c2;
  c1 += o.c1;
  c0 += o.c0;
  return *this;
}

QuarticPoly QuarticPoly::operator*(double k) const {
  return QuarticPoly{c4 * k, c3 * k, c2 * k, c1 * k, c0 * k};
}

std::vector<double> real_roots_cubic(double c3, double c2, double c1, double c0) {
  std::vector<double> roots;
  if (c3 == 0.0) {
    roots = quadratic_roots(c2, c1, c0);
  } else {
    const double b = c2 / c3;
    const double c = c1 / c3;
    const double d = c0 / c3;
    // t = y - b/3 gives y^3 + P y + Q = 0.
    const double shift = b / 3.0;
    const double P = c - b * b / 3.0;
    const double Q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double disc = -(4.0 * P * P * P + 27.0 * Q * Q);
    const double size = std::max(std::abs(4.0 * P * P * P), 27.0 * Q * Q);
    if (size == 0.0) {
      roots = {-shift};  // triple root
    } else if (std::abs(disc) <= kNearDoubleRoot * size) {
      roots = companion_roots(b, c, d);
    } else if (disc > 0.0) {
      // Three distinct real roots (P < 0).
      const double m = 2.0 * std::sqrt(-P / 3.0);
      const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
      const double phi = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k) {
        roots.push_back(m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift);
      }
    } else {
      const double root = std::sqrt(Q * Q / 4.0 + P * P * P / 27.0);
      const double A = -std::copysign(std::cbrt(std::abs(Q) / 2.0 + root), Q);
      const double B = A != 0.0 ? -P / (3.0 * A) : 0.0;
      roots = {A + B - shift};
    }
  }
  for (double& r : roots) r = polish(c3, c2, c1, c0, r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

LineSearchResult minimize_quartic_nonneg(const QuarticPoly& q) {
  const double lead = q.degree() == 4   ? q.c4
                      : q.degree() == 3 ? q.c3
                      : q.degree() == 2 ? q.c2
                      : q.degree() == 1 ? q.c1
                                        : 0.0;
  if (lead < 0.0) {
    throw std::invalid_argument("line restriction is unbounded below on t >= 0");
  }
  if (!std::isfinite(q.c4) || !std::isfinite(q.c3) || !std::isfinite(q.c2) ||
      !std::isfinite(q.c1) || !std::isfinite(q.c0)) {
    throw std::invalid_argument("quartic coefficients must be finite");
  }
  LineSearchResult res;
  res.candidates.push_back(0.0);
  for (double r : real_roots_cubic(4.0 * q.c4, 3.0 * q.c3, 2.0 * q.c2, q.c1)) {
    if (r > 0.0) res.candidates.push_back(r);
  }
  res.t_star = 0.0;
  res.p_at_t = q(0.0);
  for (double t : res.candidates) {
    const double v = q(t);
    if (v < res.p_at_t || (v == res.p_at_t && t < res.t_star)) {
      res.t_star = t;
      res.p_at_t = v;
    }
  }
  return res;
}

}  // namespace elsgd
