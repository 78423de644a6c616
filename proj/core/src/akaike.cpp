#include "elsgd/akaike.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace elsgd {
namespace {

constexpr double kFlushToZero = 1e-300;

void check_dims(std::size_t got, const Spectrum& spec) {
  if (got != spec.size()) {
    throw std::invalid_argument("simplex point dimension does not match spectrum dimension");
  }
}

// T in the affine-normalized coordinates u (u_1 = 1, u_n = 0). The map is
// invariant under affine changes of lambda, so this is exact T.
// Returns false when the variance vanishes.
bool apply_t(const Vector& p, const Vector& u, Vector& out) {
  CompensatedSum mean;
  for (Eigen::Index i = 0; i < p.size(); ++i) mean += p[i] * u[i];
  const double m = mean.value();
  out.resize(p.size());
  CompensatedSum total;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double d = m - u[i];
    out[i] = p[i] * d * d;
    total += out[i];
  }
  const double var = total.value();
  if (!(var > 0.0)) return false;
  out /= var;
  return true;
}

double max_middle(const Vector& p) {
  double m = 0.0;
  for (Eigen::Index i = 1; i + 1 < p.size(); ++i) m = std::max(m, std::abs(p[i]));
  return m;
}

void require_unit_open(double s) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("s must lie in (0, 1)");
}

void require_a(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in (0, 1]");
}

}  // namespace

SimplexPoint::SimplexPoint(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw std::invalid_argument("simplex point must be nonempty");
  CompensatedSum total;
  for (Eigen::Index i = 0; i < probs_.size(); ++i) {
    if (!std::isfinite(probs_[i]) || probs_[i] < 0.0) {
      throw std::invalid_argument("probabilities must be finite and nonnegative");
    }
    total += probs_[i];
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    throw std::invalid_argument("probabilities must sum to 1");
  }
  probs_ /= total.value();
}

SimplexPoint::SimplexPoint(std::initializer_list<double> probs)
    : SimplexPoint(Vector(Eigen::Map<const Vector>(probs.begin(),
                                                   static_cast<Eigen::Index>(probs.size())))) {}

SimplexPoint SimplexPoint::trusted(Vector probs) { return SimplexPoint(std::move(probs), Trusted{}); }

bool SimplexPoint::in_domain() const { return (probs_.array() > 0.0).count() >= 2; }

SimplexPoint sigma(const StateVector& x, const Spectrum& spec) {
  check_dims(static_cast<std::size_t>(x.size()), spec);
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw std::invalid_argument("sigma is undefined at x = 0");
  Vector p = (spec.values().array() / spec.largest() * x.array() / scale).square();
  CompensatedSum total;
  for (Eigen::Index i = 0; i < p.size(); ++i) total += p[i];
  p /= total.value();
  return SimplexPoint::trusted(std::move(p));
}

StateVector sigma_inv(const SimplexPoint& p, const Spectrum& spec) {
  check_dims(p.size(), spec);
  return p.probs().array().sqrt() / spec.values().array();
}

SimplexPoint t_map(const SimplexPoint& p, const Spectrum& spec) {
  check_dims(p.size(), spec);
  Vector out;
  if (!apply_t(p.probs(), spec.unit_positions(), out)) {
    throw std::domain_error("t_map is undefined at a vertex of the simplex (zero variance)");
  }
  return SimplexPoint::trusted(std::move(out));
}

double variance(const SimplexPoint& p, const Spectrum& spec) {
  check_dims(p.size(), spec);
  const Vector& l = spec.values();
  CompensatedSum mean;
  for (Eigen::Index i = 0; i < l.size(); ++i) mean += p.probs()[i] * l[i];
  CompensatedSum var;
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    const double d = mean.value() - l[i];
    var += p.probs()[i] * d * d;
  }
  return var.value();
}

Vector theta_map(const Vector& q, const Spectrum& spec) {
  const auto n = static_cast<Eigen::Index>(spec.size());
  if (q.size() != n - 1) throw std::invalid_argument("theta_map expects n - 1 coordinates");
  Vector p(n);
  p.head(n - 1) = q;
  p[n - 1] = 1.0 - q.sum();
  Vector out;
  if (!apply_t(p, spec.unit_positions(), out)) {
    throw std::domain_error("theta_map is undefined at a vertex");
  }
  return out.head(n - 1);
}

LimitResult limit_probability(const SimplexPoint& p0, const Spectrum& spec, LimitOptions opts) {
  check_dims(p0.size(), spec);
  if (!p0.in_domain()) throw std::domain_error("limit_probability needs a non-vertex start");
  const auto n = static_cast<Eigen::Index>(spec.size());
  const double a = spec.a();
  LimitResult result;
  if (n == 2) {
    // T is the involution [1-s, s] -> [s, 1-s].
    result.s = p0[1];
    result.converged = true;
    result.roc = roc_from_s(result.s, a);
    return result;
  }
  const Vector& u = spec.unit_positions();
  Vector p = p0.probs();
  Vector half;
  Vector next;
  for (std::size_t k = 0; k <= opts.max_iter; ++k) {
    if (!apply_t(p, u, half) || !apply_t(half, u, next)) {
      // Numerically collapsed onto a vertex.
      result.residual = 1.0;
      break;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (next[i] < kFlushToZero) next[i] = 0.0;
    }
    const double displacement = (next - p).cwiseAbs().maxCoeff();
    result.residual = std::max(displacement, max_middle(next));
    result.iterations = k;
    if (result.residual <= opts.tol) {
      result.converged = true;
      break;
    }
    p.swap(next);
  }
  result.s = clamp_unit(p[n - 1]);
  result.roc = roc_from_s(result.s, a);
  return result;
}

double roc_from_s(double s, double a) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in [0, 1]");
  require_a(a);
  const double gap = 1.0 - a;
  const double x = s * (1.0 - s) * gap * gap / a;
  return std::sqrt(clamp_unit(x / (1.0 + x)));
}

double theta_from_s(double s, double a) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("s must lie in [0, 1]");
  require_a(a);
  return std::atan2(std::sqrt(s), a * std::sqrt(1.0 - s));
}

double s_from_theta(double theta, double a) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2 + 1e-15)) {
    throw std::invalid_argument("theta must lie in [0, pi/2]");
  }
  require_a(a);
  const double sn = a * std::sin(theta);
  const double cs = std::cos(theta);
  return sn * sn / (cs * cs + sn * sn);
}

StabilityReport jacobian_at_fixed_point(double s, const Spectrum& spec) {
  require_unit_open(s);
  const std::size_t n = spec.size();
  if (n < 2) throw std::invalid_argument("jacobian_at_fixed_point needs n >= 2");
  const auto dim = static_cast<Eigen::Index>(n - 1);
  StabilityReport report;
  report.s = s;
  report.jacobian = Matrix::Zero(dim, dim);
  report.jacobian(0, 0) = -1.0;
  const double ss = s * (1.0 - s);
  const auto& alphas = spec.alphas();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double al = alphas[i];
    const auto col = static_cast<Eigen::Index>(i + 1);
    report.jacobian(0, col) = -al * al / s;
    report.jacobian(col, col) = (al - s) * (al - s) / ss;
    const double r = (ss - al * (1.0 - al)) / ss;
    report.mu.push_back(r * r);
    if (std::abs(s - al) <= 1e-12 || std::abs(s - (1.0 - al)) <= 1e-12) report.singular = true;
  }
  report.in_interval = n < 3 || attracting_interval(spec).contains(s);
  return report;
}

Matrix jacobian_theta_squared(double s, const Spectrum& spec) {
  return jacobian_at_fixed_point(1.0 - s, spec).jacobian * jacobian_at_fixed_point(s, spec).jacobian;
}

Interval attracting_interval(const Spectrum& spec) {
  const auto& alphas = spec.alphas();
  if (alphas.empty()) {
    throw std::invalid_argument("attracting_interval needs an intermediate eigenvalue (n >= 3)");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (std::abs(alphas[i] - 0.5) < std::abs(alphas[best] - 0.5)) best = i;
  }
  const double al = alphas[best];
  const double w = 0.5 * std::sqrt(1.0 - 2.0 * al * (1.0 - al));
  return Interval{0.5 - w, 0.5 + w, best + 1};
}

double intermediate_offset(const Spectrum& spec, DeltaRule rule) {
  const std::size_t n = spec.size();
  if (n < 3) throw std::invalid_argument("intermediate_offset needs n >= 3");
  const double mid = 0.5 * (spec.largest() + spec.smallest());
  const double half = 0.5 * (spec.largest() - spec.smallest());
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = (spec[i] - mid) / half;
    const double key = rule == DeltaRule::Signed ? d : std::abs(d);
    if (i == 1 || key < best) best = key;
  }
  return best;
}

double akaike_lower_bound(const Spectrum& spec, DeltaRule rule) {
  const double delta = intermediate_offset(spec, rule);
  const double a = spec.a();
  const double d2 = delta * delta;
  const double b = 4.0 * (1.0 + d2) / (1.0 - d2);
  return (1.0 - a) / std::sqrt((1.0 + a) * (1.0 + a) + b * a);
}

}  // namespace elsgd
