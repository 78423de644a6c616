#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "elsgd/akaike.hpp"
#include "elsgd/parallel.hpp"
#include "elsgd/quadratic.hpp"
#include "elsgd/roc.hpp"
#include "oracles.hpp"

using namespace elsgd;

namespace {

Vector vec(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Average of rho^k over x0 = (cos t, sin t), t uniform, by Simpson's rule on
// the direct shrinking-factor formula.
double simpson_average_2d(double a, int k) {
  const auto f = [a, k](double t) {
    return std::pow(oracle::shrink_factor({1.0, a}, {std::cos(t), std::sin(t)}), k);
  };
  return oracle::simpson(f, 0.0, std::numbers::pi / 2, 200000) / (std::numbers::pi / 2);
}

}  // namespace

TEST(EstimateRoc, WorstSeed) {
  for (const auto& lam : std::vector<std::vector<double>>{{2, 1}, {3, 2, 1}, {5, 4, 2, 1, 0.5}}) {
    const auto spec = Spectrum::make(lam);
    const auto est = estimate_roc(worst_seed(spec), spec);
    EXPECT_NEAR(est.rho_star, worst_case_roc(spec), 1e-10);
  }
}

TEST(EstimateRoc, RandomSeedInBracket) {
  const auto spec = Spectrum::make({1.0, 0.505, 0.01});
  Rng rng = make_stream(3, 0);
  for (int i = 0; i < 50; ++i) {
    const auto est = estimate_roc(sample_unit_sphere(3, rng), spec);
    ASSERT_TRUE(est.converged);
    EXPECT_GE(est.rho_star, 0.9614);
    EXPECT_LE(est.rho_star, 0.9802);
  }
}

TEST(EstimateRoc, TwoDimensionalIsShrinkFactor) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto spec = Spectrum::make(oracle::random_spectrum(2, rng));
    const Vector x = vec(oracle::random_gaussian(2, rng));
    EXPECT_NEAR(estimate_roc(x, spec).rho_star, shrink_factor(x, spec), 1e-12);
  }
}

TEST(EstimateRoc, MethodsAgree) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(3, 5);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = dim(rng);
    // Keep the condition number moderate so the geometric mean stabilizes
    // before the iterates underflow.
    std::vector<double> lam = oracle::random_spectrum(n, rng);
    if (lam.back() / lam.front() < 0.02) continue;
    const auto spec = Spectrum::make(lam);
    const Vector x = vec(oracle::random_gaussian(n, rng));
    const auto est = estimate_roc(x, spec);
    ASSERT_TRUE(est.cross_check.has_value());
    if (!est.converged) continue;
    EXPECT_NEAR(est.rho_star, *est.cross_check, 1e-6) << "spectrum " << spec.values().transpose();
    ++compared;
  }
  EXPECT_GT(compared, 300);
}

TEST(ClosedForm, Examples) {
  EXPECT_EQ(average_sq_roc_closed_form_2d(1.0), 0.0);
  EXPECT_NEAR(average_sq_roc_closed_form_2d(0.25), 0.5 * 0.25 / (1.25 * 0.75), 1e-15);
  EXPECT_LT(average_sq_roc_closed_form_2d(1e-12), 1e-5);
}

TEST(ClosedForm, MatchesSimpsonOracle) {
  for (double a : {0.5, 0.1, 0.01}) {
    EXPECT_NEAR(average_sq_roc_closed_form_2d(a), simpson_average_2d(a, 2), 1e-10) << a;
  }
}

TEST(Quadrature, Examples) {
  for (double a : {0.5, 0.1, 0.01, 0.001}) {
    const auto r = average_roc_quadrature_2d(a, Moment::Second);
    EXPECT_NEAR(r.mean, average_sq_roc_closed_form_2d(a), 1e-10) << a;
  }
  EXPECT_EQ(average_roc_quadrature_2d(1.0, Moment::First).mean, 0.0);
  const double tiny = average_roc_quadrature_2d(1e-6, Moment::First).mean;
  EXPECT_LE(tiny, std::sqrt(average_sq_roc_closed_form_2d(1e-6)));
  for (double a : {0.5, 0.1, 0.01}) {
    EXPECT_NEAR(average_roc_quadrature_2d(a, Moment::First).mean, simpson_average_2d(a, 1), 1e-9) << a;
  }
}

TEST(MonteCarlo, TwoDimensionalMatchesQuadrature) {
  const auto spec = Spectrum::make({1.0, 0.25});
  const auto mc = average_roc_monte_carlo(spec, 100000, 42);
  const double quad = average_roc_quadrature_2d(0.25, Moment::First).mean;
  EXPECT_NEAR(mc.mean, quad, 3.0 * mc.std_error);
  EXPECT_LE(mc.mean * mc.mean, mc.mean_square + 3.0 * mc.std_error);
  EXPECT_EQ(mc.seed, 42u);
}

TEST(MonteCarlo, IllConditioned2D) {
  const auto mc = average_roc_monte_carlo(Spectrum::make({1.0, 1e-6}), 20000, 1);
  EXPECT_LT(mc.mean, 0.05);
}

TEST(MonteCarlo, IntermediateEigenvalue) {
  const auto mc = average_roc_monte_carlo(Spectrum::make({1.0, 0.505, 0.01}), 5000, 1);
  EXPECT_GE(mc.mean, 0.96);
  EXPECT_EQ(mc.nonconverged, 0u);
  EXPECT_LE(mc.mean * mc.mean, mc.mean_square + 3.0 * mc.std_error);
}

TEST(MonteCarlo, IndependentOfWorkerCount) {
  const auto spec = Spectrum::make({1.0, 0.6, 0.3, 0.05});
  ::setenv("ELS_GD_THREADS", "1", 1);
  const auto one = sample_limits(spec, 5000, 9);
  ::setenv("ELS_GD_THREADS", "4", 1);
  const auto four = sample_limits(spec, 5000, 9);
  ::unsetenv("ELS_GD_THREADS");
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].rho_star, four[i].rho_star);
    EXPECT_EQ(one[i].s, four[i].s);
  }
}

TEST(MonteCarlo, RejectsTooFewSamples) {
  EXPECT_THROW(average_roc_monte_carlo(Spectrum::make({2.0, 1.0}), 10, 1), std::invalid_argument);
}

TEST(Histogram, ModeAndInterval) {
  const auto spec = Spectrum::make({1.0, 0.55, 0.1});
  const auto h = limit_angle_histogram(spec, 20000, 200, 1);
  const std::size_t mode = h.mode_bin();
  EXPECT_LE(h.bin_edges[mode], std::atan(10.0));
  EXPECT_GE(h.bin_edges[mode + 1], std::atan(10.0));
  EXPECT_EQ(h.outside_interval, 0u);
  EXPECT_EQ(h.nonconverged, 0u);
  double integral = 0.0;
  for (std::size_t i = 0; i < h.densities.size(); ++i) {
    integral += h.densities[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
  }
  EXPECT_NEAR(integral, 1.0, 1e-9);
}

TEST(Histogram, RejectsTwoDimensional) {
  EXPECT_THROW(limit_angle_histogram(Spectrum::make({2.0, 1.0}), 1000, 10, 1), std::invalid_argument);
}

TEST(Sphere, Examples) {
  Rng rng = make_stream(1, 0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(std::abs(sample_unit_sphere(1, rng)[0]), 1.0);

  const std::size_t n_samples = 100000;
  Vector mean = Vector::Zero(4);
  std::vector<double> abs_x1;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Vector x = sample_unit_sphere(4, rng);
    EXPECT_NEAR(x.norm(), 1.0, 1e-12);
    mean += x;
  }
  mean /= static_cast<double>(n_samples);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_LT(std::abs(mean[i]), 4.0 / std::sqrt(double(n_samples)));

  // On the 2-sphere |x_1| is uniform on [0, 1] (Archimedes). KS at 1%.
  for (std::size_t i = 0; i < n_samples; ++i) abs_x1.push_back(std::abs(sample_unit_sphere(3, rng)[0]));
  std::sort(abs_x1.begin(), abs_x1.end());
  double d = 0.0;
  const double n = static_cast<double>(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    d = std::max({d, std::abs((i + 1) / n - abs_x1[i]), std::abs(abs_x1[i] - i / n)});
  }
  EXPECT_LT(d, 1.63 / std::sqrt(n));
}

TEST(Properties, BracketingOverSeeds) {
  const auto spec = Spectrum::make({1.0, 0.7, 0.2, 0.05});
  const double lower = akaike_lower_bound(spec);
  const double upper = worst_case_roc(spec);
  std::size_t below = 0;
  for (const auto& s : sample_limits(spec, 10000, 17)) {
    EXPECT_LE(s.rho_star, upper + 1e-10);
    if (s.rho_star < lower - 1e-6) ++below;
  }
  EXPECT_EQ(below, 0u);
}
