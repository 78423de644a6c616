#pragma once

#include <cstddef>

#include "elsgd/numeric.hpp"
#include "elsgd/objective.hpp"

namespace elsgd {

/// f(x) = sum_{i=2}^n 100 (x_i - x_{i-1}^2)^2 + (1 - x_{i-1})^2, n >= 2.
double rosenbrock_value(const Vector& x);
Vector rosenbrock_grad(const Vector& x);
Matrix rosenbrock_hessian(const Vector& x);

class RosenbrockObjective final : public Objective {
 public:
  /// Throws std::invalid_argument for n < 2.
  explicit RosenbrockObjective(std::size_t n);

  std::size_t dim() const override { return n_; }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  QuarticPoly line_quartic(const Vector& x, const Vector& d) const override;

 private:
  std::size_t n_;
};

}  // namespace elsgd
