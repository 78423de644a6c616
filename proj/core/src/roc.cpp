#include "elsgd/roc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace elsgd {
namespace {

struct GeometricMeanResult {
  double rho = 0.0;
  std::size_t steps = 0;
  double residual = 0.0;
  bool converged = false;
};

// Running geometric mean of rho_k over consecutive windows. The iterate is
// renormalized every step; rho and the GD direction are scale invariant.
GeometricMeanResult geometric_mean_roc(const StateVector& x0, const Spectrum& spec,
                                       const RocOptions& opts) {
  GeometricMeanResult out;
  const std::size_t w = std::max<std::size_t>(opts.window, 1);
  std::vector<double> logs;
  StateVector x = x0 / x0.cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < opts.max_k; ++k) {
    const double rho = shrink_factor(x, spec);
    if (rho == 0.0) {
      out.rho = 0.0;
      out.steps = k + 1;
      out.converged = true;
      return out;
    }
    logs.push_back(std::log(rho));
    x = gd_step(x, spec);
    x /= x.cwiseAbs().maxCoeff();
    if (logs.size() >= 2 * w) {
      double cur = 0.0;
      double prev = 0.0;
      const std::size_t end = logs.size();
      for (std::size_t i = end - w; i < end; ++i) cur += logs[i];
      for (std::size_t i = end - 2 * w; i < end - w; ++i) prev += logs[i];
      const double gm_cur = std::exp(cur / static_cast<double>(w));
      const double gm_prev = std::exp(prev / static_cast<double>(w));
      out.rho = gm_cur;
      out.steps = end;
      out.residual = std::abs(gm_cur - gm_prev);
      if (out.residual <= opts.window_tol) {
        out.converged = true;
        return out;
      }
    }
  }
  if (logs.size() < 2 * w && !logs.empty()) {
    double sum = 0.0;
    for (double v : logs) sum += v;
    out.rho = std::exp(sum / static_cast<double>(logs.size()));
    out.steps = logs.size();
  }
  return out;
}

LimitSample limit_sample(const StateVector& x, const Spectrum& spec, const LimitOptions& limit) {
  const SimplexPoint p = sigma(x, spec);
  if (spec.size() == 2) return {shrink_factor(x, spec), p[1], true};
  if (!p.in_domain()) return {0.0, p[spec.size() - 1], true};
  const LimitResult r = limit_probability(p, spec, limit);
  return {r.roc, r.s, r.converged};
}

}  // namespace

const char* to_string(RocMethod m) {
  switch (m) {
    case RocMethod::LimitProbability:
      return "limit-probability";
    case RocMethod::GeometricMean:
      return "geometric-mean";
    case RocMethod::Both:
      return "both";
  }
  return "unknown";
}

RocEstimate estimate_roc(const StateVector& x0, const Spectrum& spec, const RocOptions& opts) {
  if (static_cast<std::size_t>(x0.size()) != spec.size()) {
    throw std::invalid_argument("state dimension does not match spectrum dimension");
  }
  if (x0.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("estimate_roc needs x0 != 0");

  RocEstimate est;
  const SimplexPoint p = sigma(x0, spec);
  const std::size_t n = spec.size();

  if (n == 2 || !p.in_domain()) {
    // rho_k is constant in 2-D; eigenvectors converge in one step.
    est.method = opts.method == RocMethod::GeometricMean ? RocMethod::GeometricMean
                                                         : RocMethod::LimitProbability;
    est.rho_star = shrink_factor(x0, spec);
    est.converged = true;
    if (n == 2 || p[0] == 1.0 || p[n - 1] == 1.0) est.limit_s = p[n - 1];
    if (opts.method == RocMethod::Both) est.cross_check = est.rho_star;
    return est;
  }

  if (opts.method == RocMethod::GeometricMean) {
    const auto gm = geometric_mean_roc(x0, spec, opts);
    est.method = RocMethod::GeometricMean;
    est.rho_star = gm.rho;
    est.k_used = gm.steps;
    est.residual = gm.residual;
    est.converged = gm.converged;
    return est;
  }

  const LimitResult lim = limit_probability(p, spec, opts.limit);
  est.method = RocMethod::LimitProbability;
  est.rho_star = lim.roc;
  est.k_used = lim.iterations;
  est.residual = lim.residual;
  est.limit_s = lim.s;
  est.converged = lim.converged;
  if (opts.method == RocMethod::Both) {
    est.cross_check = geometric_mean_roc(x0, spec, opts).rho;
  }
  return est;
}

double average_sq_roc_closed_form_2d(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in (0, 1]");
  const double r = std::sqrt(a);
  return r * (1.0 - r) * (1.0 - r) / ((1.0 + a) * (1.0 - r + a));
}

AverageRocResult average_roc_quadrature_2d(double a, Moment which, double tol) {
  if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("a must lie in (0, 1]");
  AverageRocResult out;
  out.a = a;
  std::size_t evals = 0;
  // Integrand in phi = pi/2 - theta.
  auto integrand = [&](double phi) {
    ++evals;
    const double c = a * std::cos(phi);
    const double sn = std::sin(phi);
    const double d = sn * sn + c * c;
    const double x = (c * sn / d) * (c * sn / d) * (1.0 - a) * (1.0 - a) / a;
    const double rho_sq = x / (1.0 + x);
    return which == Moment::First ? std::sqrt(rho_sq) : rho_sq;
  };
  using Gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Geometric panels on both sides of the peak at atan(a).
  std::vector<double> cuts{0.0};
  const double peak = std::atan(a);
  const double floor = peak * a * 1e-3;
  for (double c = peak; c > floor; c /= 4.0) cuts.insert(cuts.begin() + 1, c);
  for (double c = 4.0 * peak; c < std::numbers::pi / 2; c *= 4.0) cuts.push_back(c);
  cuts.push_back(std::numbers::pi / 2);
  double integral = 0.0;
  double err = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double panel_err = 0.0;
    // Each panel is mapped onto [0, 1]; Boost 1.74 leaves the local error unscaled.
    const double lo = cuts[k];
    const double width = cuts[k + 1] - lo;
    auto unit = [&](double t) { return width * integrand(lo + width * t); };
    integral += Gk::integrate(unit, 0.0, 1.0, 20, tol, &panel_err);
    err += panel_err;
  }
  out.mean = integral / (std::numbers::pi / 2);
  out.error_estimate = err;
  out.samples = evals;
  return out;
}

StateVector sample_unit_sphere(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_unit_sphere needs n >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector x(static_cast<Eigen::Index>(n));
  for (;;) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
    const double norm = x.norm();
    if (norm > 0.0 && std::isfinite(norm)) return x / norm;
  }
}

std::vector<LimitSample> sample_limits(const Spectrum& spec, std::size_t n_samples,
                                       std::uint64_t seed, const LimitOptions& limit) {
  std::vector<LimitSample> out(n_samples);
  for_each_block(n_samples, kSampleBlock, [&](std::size_t b, std::size_t begin, std::size_t end) {
    Rng rng = make_stream(seed, b);
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = limit_sample(sample_unit_sphere(spec.size(), rng), spec, limit);
    }
  });
  return out;
}

AverageRocResult average_roc_monte_carlo(const Spectrum& spec, std::size_t n_samples,
                                         std::uint64_t seed, const LimitOptions& limit) {
  if (n_samples < 100) throw std::invalid_argument("Monte Carlo needs at least 100 samples");
  const auto samples = sample_limits(spec, n_samples, seed, limit);
  CompensatedSum sum;
  CompensatedSum sum_sq;
  AverageRocResult out;
  for (const auto& s : samples) {
    sum += s.rho_star;
    sum_sq += s.rho_star * s.rho_star;
    if (!s.converged) ++out.nonconverged;
  }
  const auto n = static_cast<double>(n_samples);
  out.mean = sum.value() / n;
  out.mean_square = sum_sq.value() / n;
  const double var = std::max(0.0, (sum_sq.value() - n * out.mean * out.mean) / (n - 1.0));
  out.std_error = std::sqrt(var / n);
  out.samples = n_samples;
  out.a = spec.a();
  out.seed = seed;
  return out;
}

std::size_t AngleHistogram::mode_bin() const {
  return static_cast<std::size_t>(
      std::distance(densities.begin(), std::max_element(densities.begin(), densities.end())));
}

AngleHistogram limit_angle_histogram(const Spectrum& spec, std::size_t n_samples,
                                     std::size_t bins, std::uint64_t seed,
                                     const LimitOptions& limit) {
  if (spec.size() < 3) throw std::invalid_argument("limit_angle_histogram needs n >= 3");
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  AngleHistogram h;
  h.samples = n_samples;
  h.seed = seed;
  const double width = (std::numbers::pi / 2) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.bin_edges.push_back(width * static_cast<double>(i));
  h.bin_edges.back() = std::numbers::pi / 2;

  const Interval interval = attracting_interval(spec);
  std::vector<std::size_t> counts(bins, 0);
  std::size_t used = 0;
  for (const auto& s : sample_limits(spec, n_samples, seed, limit)) {
    if (!s.converged) {
      ++h.nonconverged;
      continue;
    }
    if (!interval.contains(s.s, 1e-6)) ++h.outside_interval;
    const double theta = theta_from_s(s.s, spec.a());
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(theta / width));
    ++counts[bin];
    ++used;
  }
  h.densities.resize(bins, 0.0);
  if (used > 0) {
    for (std::size_t i = 0; i < bins; ++i) {
      h.densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(used) * width);
    }
  }
  return h;
}

}  // namespace elsgd
