#include "elsgd/rosenbrock.hpp"

#include <stdexcept>

namespace elsgd {
namespace {

void check(const Vector& x) {
  if (x.size() < 2) throw std::invalid_argument("rosenbrock needs n >= 2");
}

}  // namespace

double rosenbrock_value(const Vector& x) {
  check(x);
  CompensatedSum acc;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double u = x[i] - x[i - 1] * x[i - 1];
    const double v = 1.0 - x[i - 1];
    acc += 100.0 * u * u + v * v;
  }
  return acc.value();
}

Vector rosenbrock_grad(const Vector& x) {
  check(x);
  Vector g = Vector::Zero(x.size());
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double u = x[i] - x[i - 1] * x[i - 1];
    g[i] += 200.0 * u;
    g[i - 1] += -400.0 * u * x[i - 1] - 2.0 * (1.0 - x[i - 1]);
  }
  return g;
}

Matrix rosenbrock_hessian(const Vector& x) {
  check(x);
  Matrix h = Matrix::Zero(x.size(), x.size());
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double p = x[i - 1];
    h(i, i) += 200.0;
    h(i, i - 1) += -400.0 * p;
    h(i - 1, i) += -400.0 * p;
    h(i - 1, i - 1) += 1200.0 * p * p - 400.0 * x[i] + 2.0;
  }
  return h;
}

RosenbrockObjective::RosenbrockObjective(std::size_t n) : n_(n) {
  if (n < 2) throw std::invalid_argument("rosenbrock needs n >= 2");
}

double RosenbrockObjective::value(const Vector& x) const { return rosenbrock_value(x); }

Vector RosenbrockObjective::gradient(const Vector& x) const { return rosenbrock_grad(x); }

QuarticPoly RosenbrockObjective::line_quartic(const Vector& x, const Vector& d) const {
  check(x);
  QuarticPoly q;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    const double p = x[i - 1];
    const double dp = d[i - 1];
    // x_i + t d_i - (p + t dp)^2
    const QuarticPoly curve =
        QuarticPoly::square_of_quadratic(x[i] - p * p, d[i] - 2.0 * p * dp, -dp * dp);
    q += curve * 100.0;
    q += QuarticPoly::square_of_quadratic(1.0 - p, -dp, 0.0);
  }
  return q;
}

}  // namespace elsgd
