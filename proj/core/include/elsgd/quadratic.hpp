#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "elsgd/numeric.hpp"

namespace elsgd {

using StateVector = Vector;

/// Eigenvalues of a diagonal, positive definite A = diag(lambda), stored in
/// strictly decreasing order.
///
/// Intermediate eigenvalues are also described by their barycentric weight
/// alpha_i in (0,1), lambda_i = alpha_i * lambda_1 + (1 - alpha_i) * lambda_n.
/// The GD dynamics on the simplex depend on the spectrum only through these
/// weights.
class Spectrum {
 public:
  /// Throws std::invalid_argument unless values is nonempty, positive and
  /// strictly decreasing. Repeated eigenvalues must go through
  /// reduce_multiplicities().
  static Spectrum make(std::span<const double> values);
  static Spectrum make(std::initializer_list<double> values) {
    return make(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const Vector& values() const { return values_; }
  double largest() const { return values_[0]; }
  double smallest() const { return values_[values_.size() - 1]; }

  /// lambda_n / lambda_1 = 1 / cond(A).
  double a() const { return a_; }
  double cond() const { return 1.0 / a_; }

  /// alpha_2, ..., alpha_{n-1}; empty for n <= 2.
  const std::vector<double>& alphas() const { return alphas_; }

  /// (lambda_i - lambda_n) / (lambda_1 - lambda_n) for all i; 1 for i = 1 and
  /// 0 for i = n. All zeros when n = 1.
  const Vector& unit_positions() const { return unit_; }

 private:
  Spectrum() = default;

  Vector values_;
  Vector unit_;
  std::vector<double> alphas_;
  double a_ = 1.0;
};

struct Trajectory {
  std::vector<StateVector> states;
  std::vector<double> shrink_factors;
  std::vector<double> step_sizes;

  std::size_t steps() const { return shrink_factors.size(); }
};

/// One step of exact-line-search GD on f(x) = x^T A x / 2:
/// x - (x^T A^2 x / x^T A^3 x) A x. Returns exact zero at 0 and at
/// eigenvectors.
StateVector gd_step(const StateVector& x, const Spectrum& spec);

/// The exact line-search step length x^T A^2 x / x^T A^3 x. Zero at x = 0.
double els_step_size(const StateVector& x, const Spectrum& spec);

/// ||GD(x)||_A / ||x||_A, computed without cancellation:
/// rho^2 = N / (1 + N) with N = sum_{i<j} p_i p_j (lambda_i - lambda_j)^2 / (lambda_i lambda_j)
/// and p = sigma(x).
double shrink_factor(const StateVector& x, const Spectrum& spec);

double a_norm(const StateVector& x, const Spectrum& spec);

/// Kantorovich bound (1 - a) / (1 + a).
double worst_case_roc(const Spectrum& spec);
double worst_case_roc(double a);

/// 2 / (lambda_1 + lambda_n).
double optimal_constant_step(const Spectrum& spec);
/// Same, for a spectrum that may contain ties.
double optimal_constant_step(std::span<const double> values);

/// k iterations of x <- (I - step A) x; records the per-step A-norm ratio.
Trajectory constant_step_gd(const StateVector& x0, const Spectrum& spec, double step,
                            std::size_t k);

/// Exact-line-search GD until ||x||_A <= tol ||x0||_A, max_k steps, or
/// ||x||_A underflows below 1e-280.
Trajectory els_gd_run(const StateVector& x0, const Spectrum& spec, std::size_t max_k,
                      double tol);

/// Seed on the lambda_1-lambda_n plane with |x_1| = (lambda_n / lambda_1) |x_n|,
/// normalized to unit Euclidean norm. Every step attains (1 - a) / (1 + a).
StateVector worst_seed(const Spectrum& spec);

struct ReducedSystem {
  StateVector x;
  Spectrum spectrum;
};

/// Merges repeated eigenvalues: each block of equal eigenvalues becomes a
/// single coordinate holding the Euclidean norm of the block. Singleton
/// blocks are copied unchanged.
/// values must be positive and nonincreasing.
ReducedSystem reduce_multiplicities(const StateVector& x0, std::span<const double> values);

}  // namespace elsgd
