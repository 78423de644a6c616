#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elsgd/numeric.hpp"
#include "elsgd/quadratic.hpp"

namespace elsgd {

/// A probability vector on the standard simplex. Construction checks
/// nonnegativity and renormalizes to an exact unit sum.
class SimplexPoint {
 public:
  /// Throws std::invalid_argument on negative entries or a non-unit sum
  /// (tolerance 1e-9 before renormalization).
  explicit SimplexPoint(Vector probs);
  SimplexPoint(std::initializer_list<double> probs);

  std::size_t size() const { return static_cast<std::size_t>(probs_.size()); }
  double operator[](std::size_t i) const { return probs_[static_cast<Eigen::Index>(i)]; }
  const Vector& probs() const { return probs_; }

  /// True unless the point is a vertex of the simplex.
  bool in_domain() const;

  /// Skips validation; the caller guarantees a normalized, nonnegative vector.
  static SimplexPoint trusted(Vector probs);

 private:
  struct Trusted {};
  SimplexPoint(Vector probs, Trusted) : probs_(std::move(probs)) {}

  Vector probs_;
};

/// p_i = lambda_i^2 x_i^2 / sum_j lambda_j^2 x_j^2.
SimplexPoint sigma(const StateVector& x, const Spectrum& spec);

/// Representative x_j = sqrt(p_j) / lambda_j of the class sigma^{-1}(p).
StateVector sigma_inv(const SimplexPoint& p, const Spectrum& spec);

/// Akaike's map T(p)_i = p_i (mean - lambda_i)^2 / variance, the GD map seen
/// through sigma. Throws std::domain_error at a vertex (zero variance).
SimplexPoint t_map(const SimplexPoint& p, const Spectrum& spec);

/// sum_j p_j (mean(p) - lambda_j)^2 in units of lambda^2.
double variance(const SimplexPoint& p, const Spectrum& spec);

/// The reduced map: the first n-1 coordinates of T with p_n = 1 - sum(q).
/// Uses the same rational formula off the simplex, so it is defined on an
/// open neighbourhood of the reduced simplex (needed for finite differences).
Vector theta_map(const Vector& q, const Spectrum& spec);

struct LimitResult {
  double s = 0.0;  // mass on lambda_n in lim T^{2k}(p0)
  std::size_t iterations = 0;  // applications of T^2
  double residual = 0.0;  // max(||T^{2k+2} p - T^{2k} p||_inf, max middle coordinate)
  double roc = 0.0;
  bool converged = false;
};

struct LimitOptions {
  double tol = 1e-12;
  std::size_t max_iter = 1'000'000;
};

/// Iterates T^2 from p0 until successive even iterates agree to tol in the
/// max norm and every intermediate coordinate is <= tol. Never throws on
/// non-convergence; check LimitResult::converged.
LimitResult limit_probability(const SimplexPoint& p0, const Spectrum& spec,
                              LimitOptions opts = {});

/// Limiting rate sqrt(1 - 1/((1 - s + s a)(1 - s + s/a))) for the 2-periodic
/// limit with parameter s. Symmetric under s -> 1 - s.
double roc_from_s(double s, double a);

/// theta = atan(sqrt(s / (1 - s)) / a).
double theta_from_s(double s, double a);
/// s = a^2 sin^2(theta) / (cos^2(theta) + a^2 sin^2(theta)).
double s_from_theta(double theta, double a);

struct StabilityReport {
  double s = 0.0;
  Matrix jacobian;  // D Theta at [s; 0]
  std::vector<double> mu;  // eigenvalues of D Theta^2 other than 1, for i = 2..n-1
  bool in_interval = false;
  // s coincides (to 1e-12) with some alpha_i or 1 - alpha_i, where Theta^2 fails
  // to be a local diffeomorphism.
  bool singular = false;
};

/// Jacobian of Theta at the fixed point [s, 0, ..., 0] of Theta^2 (p_1 = s)
/// and the spectrum mu_i(s) = ((s(1-s) - alpha_i(1-alpha_i)) / (s(1-s)))^2 of
/// D Theta^2 there. Requires n >= 2 and s in (0, 1).
StabilityReport jacobian_at_fixed_point(double s, const Spectrum& spec);

/// The product D Theta|_{1-s} * D Theta|_s, i.e. the Jacobian of Theta^2 at
/// its fixed point [s; 0].
Matrix jacobian_theta_squared(double s, const Spectrum& spec);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t i_star = 0;  // 0-based index into the eigenvalue list

  bool contains(double s, double slack = 0.0) const { return s >= lo - slack && s <= hi + slack; }
  double width() const { return hi - lo; }
};

/// Limit parameters s whose fixed points of Theta^2 have no expanding
/// direction: |s - 1/2| <= sqrt(1 - 2 alpha(1 - alpha)) / 2 for the
/// intermediate alpha closest to 1/2. Requires n >= 3.
Interval attracting_interval(const Spectrum& spec);

enum class DeltaRule {
  Signed,  // min over intermediates of the signed normalized offset
  Absolute,  // min of its absolute value
};

/// Normalized offset of the intermediate eigenvalues from the midpoint of
/// [lambda_n, lambda_1], reduced by `rule`. Requires n >= 3.
double intermediate_offset(const Spectrum& spec, DeltaRule rule = DeltaRule::Signed);

/// (1 - a) / sqrt((1 + a)^2 + B a) with B = 4 (1 + delta^2) / (1 - delta^2).
/// Requires n >= 3.
double akaike_lower_bound(const Spectrum& spec, DeltaRule rule = DeltaRule::Signed);

}  // namespace elsgd
