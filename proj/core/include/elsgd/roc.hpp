#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "elsgd/akaike.hpp"
#include "elsgd/parallel.hpp"
#include "elsgd/quadratic.hpp"

namespace elsgd {

enum class RocMethod {
  LimitProbability,
  GeometricMean,
  Both,  // reports limit-probability, geometric mean as diagnostic
};

const char* to_string(RocMethod m);

struct RocOptions {
  RocMethod method = RocMethod::Both;
  LimitOptions limit{};
  std::size_t max_k = 1'000'000;  // GD steps for the geometric-mean method
  std::size_t window = 50;
  double window_tol = 1e-8;
};

/// Rate of convergence rho*(x0) = limsup (prod rho_j)^{1/k}.
struct RocEstimate {
  double rho_star = 0.0;
  RocMethod method = RocMethod::LimitProbability;
  std::size_t k_used = 0;  // T^2 applications or GD steps, by method
  double residual = 0.0;
  std::optional<double> limit_s;
  bool converged = false;
  // Geometric-mean value when method == Both.
  std::optional<double> cross_check;
};

/// For n = 2 the estimate is shrink_factor(x0) (rho_k is constant).
/// For an eigenvector seed it is 0.
RocEstimate estimate_roc(const StateVector& x0, const Spectrum& spec, const RocOptions& opts = {});

/// Closed form of (2/pi) int_0^{pi/2} rho^2 dtheta in 2-D:
/// sqrt(a) (1 - sqrt(a))^2 / ((1 + a)(1 - sqrt(a) + a)).
double average_sq_roc_closed_form_2d(double a);

enum class Moment { First = 1, Second = 2 };

struct AverageRocResult {
  double mean = 0.0;
  double std_error = 0.0;  // 0 for quadrature
  std::size_t samples = 0;  // integrand evaluations or Monte Carlo draws
  double a = 1.0;
  double mean_square = 0.0;  // Monte Carlo only: mean of rho*^2
  double error_estimate = 0.0;  // quadrature only
  std::size_t nonconverged = 0;
  std::optional<std::uint64_t> seed;
};

/// (2/pi) int_0^{pi/2} rho(s(theta), a)^k dtheta by adaptive Gauss-Kronrod.
AverageRocResult average_roc_quadrature_2d(double a, Moment which, double tol = 1e-10);

/// Mean of rho* over x0 uniform on the unit sphere.
AverageRocResult average_roc_monte_carlo(const Spectrum& spec, std::size_t n_samples,
                                         std::uint64_t seed, const LimitOptions& limit = {});

struct LimitSample {
  double rho_star = 0.0;
  double s = 0.0;
  bool converged = true;
};

/// rho* and limit probability for n_samples uniform seeds. Sample i is drawn
/// from stream (seed, i / kSampleBlock), so the output depends only on
/// (seed, n_samples).
std::vector<LimitSample> sample_limits(const Spectrum& spec, std::size_t n_samples,
                                       std::uint64_t seed, const LimitOptions& limit = {});

struct AngleHistogram {
  std::vector<double> bin_edges;  // bins + 1 edges on [0, pi/2]
  std::vector<double> densities;  // normalized over converged samples
  std::size_t samples = 0;
  std::size_t nonconverged = 0;
  std::size_t outside_interval = 0;  // converged samples with s outside I (slack 1e-6)
  std::uint64_t seed = 0;

  std::size_t mode_bin() const;
  double bin_center(std::size_t i) const { return 0.5 * (bin_edges[i] + bin_edges[i + 1]); }
};

/// Distribution of the limit angle theta(s) for x0 uniform on the sphere.
/// Requires n >= 3.
AngleHistogram limit_angle_histogram(const Spectrum& spec, std::size_t n_samples,
                                     std::size_t bins, std::uint64_t seed,
                                     const LimitOptions& limit = {});

/// Uniform point on the unit sphere in R^n (normalized standard Gaussian).
StateVector sample_unit_sphere(std::size_t n, Rng& rng);

}  // namespace elsgd
