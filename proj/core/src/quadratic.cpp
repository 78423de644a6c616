#include "elsgd/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elsgd {
namespace {

constexpr double kSnapToZero = 1e-300;
constexpr double kUnderflowNorm = 1e-280;

void check_dims(const StateVector& x, const Spectrum& spec) {
  if (static_cast<std::size_t>(x.size()) != spec.size()) {
    throw std::invalid_argument("state dimension " + std::to_string(x.size()) +
                                " does not match spectrum dimension " +
                                std::to_string(spec.size()));
  }
}

// Number of nonzero coordinates; for a strictly ordered spectrum x is an
// eigenvector iff this is 1.
Eigen::Index support_size(const StateVector& x) {
  return (x.array() != 0.0).count();
}

// sigma(x) computed after rescaling x so that no square over/underflows.
Vector simplex_weights(const StateVector& x, const Spectrum& spec) {
  const double scale = x.cwiseAbs().maxCoeff();
  Vector w = (spec.values().array() / spec.largest() * x.array() / scale).square();
  CompensatedSum total;
  for (Eigen::Index i = 0; i < w.size(); ++i) total += w[i];
  return w / total.value();
}

}  // namespace

Spectrum Spectrum::make(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("spectrum must be nonempty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw std::invalid_argument("eigenvalues must be finite and positive");
    }
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw std::invalid_argument(
          "eigenvalues must be strictly decreasing; merge ties with reduce_multiplicities");
    }
  }
  Spectrum s;
  const auto n = static_cast<Eigen::Index>(values.size());
  s.values_ = Eigen::Map<const Vector>(values.data(), n);
  s.a_ = values.back() / values.front();
  s.unit_ = Vector::Zero(n);
  if (n >= 2) {
    const double hi = values.front();
    const double lo = values.back();
    const double width = hi - lo;
    for (Eigen::Index i = 0; i < n; ++i) s.unit_[i] = (values[i] - lo) / width;
    s.unit_[0] = 1.0;
    s.unit_[n - 1] = 0.0;
    for (Eigen::Index i = 1; i + 1 < n; ++i) s.alphas_.push_back(s.unit_[i]);
  }
  return s;
}

double els_step_size(const StateVector& x, const Spectrum& spec) {
  check_dims(x, spec);
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  CompensatedSum num;
  CompensatedSum den;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double l = spec[i];
    const double xi = x[i] / scale;
    num += l * l * xi * xi;
    den += l * l * l * xi * xi;
  }
  return num.value() / den.value();
}

StateVector gd_step(const StateVector& x, const Spectrum& spec) {
  check_dims(x, spec);
  if (support_size(x) <= 1) return StateVector::Zero(x.size());
  const double step = els_step_size(x, spec);
  StateVector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = x[i] * (1.0 - step * spec[i]);
    if (std::abs(y[i]) < kSnapToZero) y[i] = 0.0;
  }
  return y;
}

double shrink_factor(const StateVector& x, const Spectrum& spec) {
  check_dims(x, spec);
  if (support_size(x) <= 1) return 0.0;
  const Vector p = simplex_weights(x, spec);
  const Vector l = spec.values() / spec.largest();
  CompensatedSum spread;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    for (Eigen::Index j = i + 1; j < p.size(); ++j) {
      if (p[j] == 0.0) continue;
      const double d = l[i] - l[j];
      spread += p[i] * p[j] * d * d / (l[i] * l[j]);
    }
  }
  const double s = spread.value();
  return std::sqrt(clamp_unit(s / (1.0 + s)));
}

double a_norm(const StateVector& x, const Spectrum& spec) {
  check_dims(x, spec);
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i] / scale;
    acc += spec[i] * xi * xi;
  }
  return scale * std::sqrt(acc.value());
}

double worst_case_roc(double a) { return (1.0 - a) / (1.0 + a); }
double worst_case_roc(const Spectrum& spec) { return worst_case_roc(spec.a()); }

double optimal_constant_step(const Spectrum& spec) {
  return 2.0 / (spec.largest() + spec.smallest());
}

double optimal_constant_step(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("spectrum must be nonempty");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return 2.0 / (*lo + *hi);
}

Trajectory constant_step_gd(const StateVector& x0, const Spectrum& spec, double step,
                            std::size_t k) {
  check_dims(x0, spec);
  if (step < 0.0) throw std::invalid_argument("step must be nonnegative");
  Trajectory traj;
  traj.states.reserve(k + 1);
  traj.states.push_back(x0);
  StateVector x = x0;
  const Vector factor = Vector::Ones(x0.size()) - step * spec.values();
  for (std::size_t it = 0; it < k; ++it) {
    const double before = a_norm(x, spec);
    x = factor.cwiseProduct(x);
    const double after = a_norm(x, spec);
    traj.shrink_factors.push_back(before > 0.0 ? after / before : 0.0);
    traj.step_sizes.push_back(step);
    traj.states.push_back(x);
  }
  return traj;
}

Trajectory els_gd_run(const StateVector& x0, const Spectrum& spec, std::size_t max_k,
                      double tol) {
  check_dims(x0, spec);
  if (support_size(x0) == 0) throw std::invalid_argument("els_gd_run needs a nonzero seed");
  Trajectory traj;
  traj.states.push_back(x0);
  const double initial = a_norm(x0, spec);
  StateVector x = x0;
  for (std::size_t k = 0; k < max_k; ++k) {
    const double norm = a_norm(x, spec);
    if (norm == 0.0 || norm <= tol * initial || norm < kUnderflowNorm) break;
    traj.shrink_factors.push_back(shrink_factor(x, spec));
    traj.step_sizes.push_back(els_step_size(x, spec));
    x = gd_step(x, spec);
    traj.states.push_back(x);
  }
  return traj;
}

StateVector worst_seed(const Spectrum& spec) {
  const std::size_t n = spec.size();
  if (n < 2) throw std::invalid_argument("worst_seed needs at least two eigenvalues");
  StateVector x = StateVector::Zero(static_cast<Eigen::Index>(n));
  x[0] = spec.a();
  x[static_cast<Eigen::Index>(n) - 1] = 1.0;
  return x / x.norm();
}

ReducedSystem reduce_multiplicities(const StateVector& x0, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("spectrum must be nonempty");
  if (static_cast<std::size_t>(x0.size()) != values.size()) {
    throw std::invalid_argument("state dimension does not match spectrum dimension");
  }
  std::vector<double> distinct;
  // Singleton blocks keep their sign, so a distinct spectrum reduces to the identity.
  std::vector<double> block_norms;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw std::invalid_argument("eigenvalues must be finite and positive");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      throw std::invalid_argument("eigenvalues must be nonincreasing");
    }
    const double xi = x0[static_cast<Eigen::Index>(i)];
    if (distinct.empty() || values[i] != distinct.back()) {
      distinct.push_back(values[i]);
      block_norms.push_back(xi);
    } else {
      block_norms.back() = std::hypot(block_norms.back(), xi);
    }
  }
  return ReducedSystem{
      Eigen::Map<const Vector>(block_norms.data(), static_cast<Eigen::Index>(block_norms.size())),
      Spectrum::make(distinct)};
}

}  // namespace elsgd
