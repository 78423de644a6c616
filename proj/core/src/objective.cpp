#include "elsgd/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace elsgd {

QuarticPoly Objective::line_quartic(const Vector& x, const Vector& d) const {
  return interpolate_line_quartic(*this, x, d);
}

QuarticPoly line_restriction(const Objective& obj, const Vector& x, const Vector& d) {
  if (static_cast<std::size_t>(x.size()) != obj.dim() || x.size() != d.size()) {
    throw std::invalid_argument("line_restriction: dimension mismatch");
  }
  return obj.line_quartic(x, d);
}

QuarticPoly interpolate_line_quartic(const Objective& obj, const Vector& x, const Vector& d) {
  const double fm2 = obj.value(x - 2.0 * d);
  const double fm1 = obj.value(x - d);
  const double f0 = obj.value(x);
  const double fp1 = obj.value(x + d);
  const double fp2 = obj.value(x + 2.0 * d);
  // Even part: c2 + c4 and 4 c2 + 16 c4; odd part: c1 + c3 and 2 c1 + 8 c3.
  const double e1 = 0.5 * (fp1 + fm1) - f0;
  const double e2 = 0.5 * (fp2 + fm2) - f0;
  const double o1 = 0.5 * (fp1 - fm1);
  const double o2 = 0.5 * (fp2 - fm2);
  QuarticPoly q;
  q.c4 = (e2 - 4.0 * e1) / 12.0;
  q.c2 = e1 - q.c4;
  q.c3 = (o2 - 2.0 * o1) / 6.0;
  q.c1 = o1 - q.c3;
  q.c0 = f0;
  return q;
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(spec_.values().cwiseProduct(x));
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  return spec_.values().cwiseProduct(x);
}

QuarticPoly QuadraticObjective::line_quartic(const Vector& x, const Vector& d) const {
  const Vector ad = spec_.values().cwiseProduct(d);
  return QuarticPoly{0.0, 0.0, 0.5 * d.dot(ad), x.dot(ad), value(x)};
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::GradientTolerance:
      return "gradient-tolerance";
    case StopReason::TargetValue:
      return "target-value";
    case StopReason::MaxIterations:
      return "max-iterations";
    case StopReason::Stall:
      return "stall";
  }
  return "unknown";
}

GenericTrajectory els_gd_generic(const Objective& obj, const Vector& x0, const StopCriteria& stop,
                                 bool keep_states) {
  if (static_cast<std::size_t>(x0.size()) != obj.dim()) {
    throw std::invalid_argument("els_gd_generic: dimension mismatch");
  }
  GenericTrajectory traj;
  Vector x = x0;
  for (std::size_t k = 0;; ++k) {
    const Vector g = obj.gradient(x);
    GenericStep rec;
    rec.f = obj.value(x);
    rec.grad_norm = g.norm();
    if (keep_states) traj.states.push_back(x);
    if (rec.grad_norm <= stop.tol_grad) {
      traj.reason = StopReason::GradientTolerance;
      traj.steps.push_back(rec);
      break;
    }
    if (rec.f <= stop.f_target) {
      traj.reason = StopReason::TargetValue;
      traj.steps.push_back(rec);
      break;
    }
    if (k >= stop.max_k) {
      traj.reason = StopReason::MaxIterations;
      traj.steps.push_back(rec);
      break;
    }
    const Vector d = -g;
    const LineSearchResult ls = minimize_quartic_nonneg(obj.line_quartic(x, d));
    if (ls.t_star == 0.0) {
      traj.reason = StopReason::Stall;
      traj.steps.push_back(rec);
      break;
    }
    rec.t_star = ls.t_star;
    traj.steps.push_back(rec);
    x += ls.t_star * d;
  }
  traj.final_x = x;
  return traj;
}

}  // namespace elsgd
