#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "elsgd/numeric.hpp"
#include "elsgd/quadratic.hpp"
#include "elsgd/quartic.hpp"

namespace elsgd {

/// An objective that is a polynomial of degree <= 4 along every line.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;

  /// Coefficients of t -> value(x + t d). The default fits the quartic
  /// through five samples of value(); subclasses override with an exact
  /// expansion.
  virtual QuarticPoly line_quartic(const Vector& x, const Vector& d) const;
};

/// p(t) = f(x + t d) from the objective's own expansion.
QuarticPoly line_restriction(const Objective& obj, const Vector& x, const Vector& d);

/// p(t) = f(x + t d) by exact interpolation through t in {-2, -1, 0, 1, 2}.
/// Independent of any analytic expansion.
QuarticPoly interpolate_line_quartic(const Objective& obj, const Vector& x, const Vector& d);

/// f(x) = x^T diag(lambda) x / 2.
class QuadraticObjective final : public Objective {
 public:
  explicit QuadraticObjective(Spectrum spec) : spec_(std::move(spec)) {}

  std::size_t dim() const override { return spec_.size(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  QuarticPoly line_quartic(const Vector& x, const Vector& d) const override;

  const Spectrum& spectrum() const { return spec_; }

 private:
  Spectrum spec_;
};

struct StopCriteria {
  double tol_grad = 1e-10;
  std::size_t max_k = 10'000;
  // Stop once f(x) <= f_target.
  double f_target = -std::numeric_limits<double>::infinity();
};

struct GenericStep {
  double f = 0.0;
  double grad_norm = 0.0;
  double t_star = 0.0;  // step taken from this iterate; 0 on the final record
};

enum class StopReason { GradientTolerance, TargetValue, MaxIterations, Stall };

const char* to_string(StopReason r);

struct GenericTrajectory {
  std::vector<GenericStep> steps;  // one record per visited iterate
  std::vector<Vector> states;  // filled when keep_states is set
  Vector final_x;
  StopReason reason = StopReason::MaxIterations;

  std::size_t iterations() const { return steps.empty() ? 0 : steps.size() - 1; }
};

/// Exact line-search GD: d = -grad f(x), t* = argmin_{t >= 0} f(x + t d).
/// A zero step with ||grad f|| > tol_grad ends the run with StopReason::Stall.
GenericTrajectory els_gd_generic(const Objective& obj, const Vector& x0, const StopCriteria& stop,
                                 bool keep_states = false);

}  // namespace elsgd
