#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "elsgd/objective.hpp"
#include "elsgd/quadratic.hpp"
#include "elsgd/quartic.hpp"
#include "elsgd/rosenbrock.hpp"
#include "oracles.hpp"

using namespace elsgd;

namespace {

QuarticPoly random_bounded(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lead(0.1, 10.0);
  std::normal_distribution<double> coef(0.0, 5.0);
  return QuarticPoly{lead(rng), coef(rng), coef(rng), coef(rng), coef(rng)};
}

// Every stationary point of p lies in |t| <= 1 + max |lower coefficient of p'| / |4 c4|.
double cauchy_bound(const QuarticPoly& q) {
  const double m = std::max({std::abs(3.0 * q.c3), std::abs(2.0 * q.c2), std::abs(q.c1)});
  return 1.0 + m / (4.0 * q.c4);
}

}  // namespace

TEST(Quartic, Evaluation) {
  const QuarticPoly q{1.0, -2.0, 3.0, -4.0, 5.0};
  EXPECT_DOUBLE_EQ(q(2.0), 16.0 - 16.0 + 12.0 - 8.0 + 5.0);
  EXPECT_DOUBLE_EQ(q.derivative(2.0), 32.0 - 24.0 + 12.0 - 4.0);
  EXPECT_EQ(q.degree(), 4);
  EXPECT_EQ((QuarticPoly{0, 0, 0, 0, 3}).degree(), 0);
  const auto sq = QuarticPoly::square_of_quadratic(1.0, 2.0, 3.0);
  for (double t : {-1.5, 0.0, 0.7, 2.0}) {
    const double v = 1.0 + 2.0 * t + 3.0 * t * t;
    EXPECT_NEAR(sq(t), v * v, 1e-12 * v * v);
  }
}

TEST(Quartic, CubicRoots) {
  const auto r = real_roots_cubic(1.0, -6.0, 11.0, -6.0);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], 1.0, 1e-14);
  EXPECT_NEAR(r[1], 2.0, 1e-14);
  EXPECT_NEAR(r[2], 3.0, 1e-14);
  // Double root at 1, simple root at -2: (t - 1)^2 (t + 2) = t^3 - 3t + 2.
  const auto d = real_roots_cubic(1.0, 0.0, -3.0, 2.0);
  ASSERT_GE(d.size(), 2u);
  EXPECT_NEAR(d.front(), -2.0, 1e-12);
  EXPECT_NEAR(d.back(), 1.0, 1e-7);
  const auto one = real_roots_cubic(1.0, 0.0, 1.0, 0.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 0.0, 1e-15);
  const auto lin = real_roots_cubic(0.0, 0.0, 2.0, -1.0);
  ASSERT_EQ(lin.size(), 1u);
  EXPECT_DOUBLE_EQ(lin[0], 0.5);
}

TEST(Quartic, MinimizeExamples) {
  const auto sq = minimize_quartic_nonneg({1.0, 0.0, -2.0, 0.0, 1.0});
  EXPECT_NEAR(sq.t_star, 1.0, 1e-12);
  EXPECT_NEAR(sq.p_at_t, 0.0, 1e-15);

  const auto flat = minimize_quartic_nonneg({1.0, 0.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(flat.t_star, 0.0);

  const auto quad = minimize_quartic_nonneg({0.0, 0.0, 2.0, -3.0, 1.0});
  EXPECT_NEAR(quad.t_star, 0.75, 1e-15);
  const auto quad_neg = minimize_quartic_nonneg({0.0, 0.0, 2.0, 3.0, 1.0});
  EXPECT_EQ(quad_neg.t_star, 0.0);

  EXPECT_THROW(minimize_quartic_nonneg({-1.0, 0.0, 0.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(minimize_quartic_nonneg({0.0, 0.0, 0.0, -1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(minimize_quartic_nonneg({0.0, 0.0, -1.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_EQ(minimize_quartic_nonneg({0.0, 0.0, 0.0, 0.0, 4.0}).t_star, 0.0);
}

TEST(Quartic, TiesGoToSmallerT) {
  // (t - 1)^2 (t - 2)^2 has equal minima at 1 and 2.
  const QuarticPoly q{1.0, -6.0, 13.0, -12.0, 4.0};
  const auto r = minimize_quartic_nonneg(q);
  EXPECT_NEAR(r.t_star, 1.0, 1e-7);
}

TEST(Quartic, GridOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const QuarticPoly q = random_bounded(rng);
    const auto r = minimize_quartic_nonneg(q);
    const auto [t, v] = oracle::grid_minimize([&](double x) { return q(x); }, cauchy_bound(q), 100001);
    const double scale = std::max(1.0, std::abs(v));
    EXPECT_NEAR(r.p_at_t, v, 1e-10 * scale) << trial;
    EXPECT_NEAR(r.t_star, t, 1e-6) << trial;
  }
}

TEST(Quartic, DescentProperty) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    const QuarticPoly q = random_bounded(rng);
    const auto r = minimize_quartic_nonneg(q);
    EXPECT_LE(r.p_at_t, q(0.0));
    if (q.c1 < 0.0) {
      EXPECT_LT(r.p_at_t, q(0.0));
    }
    if (r.p_at_t == q(0.0)) {
      EXPECT_GE(q.c1, 0.0);
    }
    for (double c : r.candidates) EXPECT_LE(r.p_at_t, q(c));
  }
}

TEST(LineRestriction, Quadratic) {
  const QuadraticObjective obj(Spectrum::make({3.0, 2.0, 0.5}));
  Vector x(3);
  x << 1.0, -2.0, 0.5;
  const Vector d = -obj.gradient(x);
  const auto q = line_restriction(obj, x, d);
  EXPECT_EQ(q.c4, 0.0);
  EXPECT_EQ(q.c3, 0.0);
  EXPECT_NEAR(q.c1, -d.dot(d), 1e-14);
  EXPECT_NEAR(minimize_quartic_nonneg(q).t_star, els_step_size(x, obj.spectrum()), 1e-14);
}

TEST(LineRestriction, RosenbrockExpansion) {
  const RosenbrockObjective obj(2);
  const Vector x = Vector::Zero(2);
  Vector d(2);
  d << 1.0, 0.0;
  const auto q = line_restriction(obj, x, d);
  // 100 t^4 + (1 - t)^2
  EXPECT_NEAR(q.c4, 100.0, 1e-12);
  EXPECT_NEAR(q.c3, 0.0, 1e-12);
  EXPECT_NEAR(q.c2, 1.0, 1e-12);
  EXPECT_NEAR(q.c1, -2.0, 1e-12);
  EXPECT_NEAR(q.c0, 1.0, 1e-12);
}

TEST(LineRestriction, InterpolationFallback) {
  // An objective that only supplies values and gradients.
  struct Quartic1D final : Objective {
    std::size_t dim() const override { return 2; }
    double value(const Vector& x) const override {
      return std::pow(x[0], 4) + x[0] * x[1] + 2.0 * x[1] * x[1];
    }
    Vector gradient(const Vector& x) const override {
      Vector g(2);
      g << 4.0 * std::pow(x[0], 3) + x[1], x[0] + 4.0 * x[1];
      return g;
    }
  } obj;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> t(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector x(2), d(2);
    x << g(rng), g(rng);
    d << g(rng), g(rng);
    const auto q = line_restriction(obj, x, d);
    for (int k = 0; k < 20; ++k) {
      const double s = t(rng);
      const double want = obj.value(x + s * d);
      EXPECT_NEAR(q(s), want, 1e-9 * (1.0 + std::abs(want)));
    }
  }
}

TEST(ElsGdGeneric, MatchesQuadraticCore) {
  const auto spec = Spectrum::make({4.0, 2.5, 1.0, 0.3});
  const QuadraticObjective obj(spec);
  Vector x0(4);
  x0 << 1.0, -1.0, 0.5, 2.0;
  StopCriteria stop;
  stop.tol_grad = 0.0;
  stop.max_k = 30;
  const auto gen = els_gd_generic(obj, x0, stop, true);
  const auto core = els_gd_run(x0, spec, 30, 0.0);
  ASSERT_EQ(gen.states.size(), core.states.size());
  for (std::size_t k = 0; k < core.states.size(); ++k) {
    EXPECT_LE((gen.states[k] - core.states[k]).norm(), 1e-12 * x0.norm()) << k;
  }
}

TEST(ElsGdGeneric, MinimizerTakesNoSteps) {
  const RosenbrockObjective obj(3);
  const auto tr = els_gd_generic(obj, Vector::Ones(3), StopCriteria{});
  EXPECT_EQ(tr.iterations(), 0u);
  EXPECT_EQ(tr.reason, StopReason::GradientTolerance);
}

TEST(ElsGdGeneric, RosenbrockConvergesAndDescends) {
  const RosenbrockObjective obj(2);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int run = 0; run < 100; ++run) {
    Vector x0(2);
    x0 << 1.0 + g(rng), 1.0 + g(rng);
    StopCriteria stop;
    stop.tol_grad = 0.0;
    stop.f_target = 1e-12;
    stop.max_k = 200000;
    const auto tr = els_gd_generic(obj, x0, stop);
    EXPECT_EQ(tr.reason, StopReason::TargetValue) << run;
    EXPECT_LT((tr.final_x - Vector::Ones(2)).norm(), 1e-5);
    for (std::size_t k = 1; k < tr.steps.size(); ++k) {
      EXPECT_LE(tr.steps[k].f, tr.steps[k - 1].f + 1e-12);
    }
  }
}
